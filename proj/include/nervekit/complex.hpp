#pragma once

#include "nervekit/ifs.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nervekit {

using Vertex = std::uint32_t;

enum class VerdictMode { Exact, Outer, Inner };
const char* to_string(VerdictMode mode);
VerdictMode parse_verdict_mode(const std::string& text);

// Abstract complex on vertices 0..n-1.  Simplices of dimension q >= 1 are
// stored flat, q+1 sorted vertices each, in lexicographic order once sealed.
class SimplicialComplex {
 public:
  explicit SimplicialComplex(std::size_t vertices = 0) : vertices_(vertices), flat_(2) {}

  std::size_t vertex_count() const { return vertices_; }
  void add(std::span<const Vertex> simplex);
  void add_edge(Vertex a, Vertex b);

  // Sorts, drops duplicates and checks closure under faces (std::logic_error
  // otherwise).
  void seal();
  bool sealed() const { return sealed_; }

  // Highest q with a q-simplex; -1 when there are no vertices.
  int dimension() const;
  std::size_t count(int q) const;
  std::span<const Vertex> simplex(int q, std::size_t i) const {
    return {flat_[q].data() + i * (q + 1), static_cast<std::size_t>(q + 1)};
  }
  const std::vector<Vertex>& flat(int q) const { return flat_.at(q); }
  std::optional<std::size_t> find(int q, std::span<const Vertex> sorted) const;
  bool contains(std::span<const Vertex> sorted) const;

 private:
  std::size_t vertices_;
  std::vector<std::vector<Vertex>> flat_;  // flat_[0] unused
  bool sealed_ = false;
};

// Same vertex space and every simplex of `sub` in `of`.
bool is_subcomplex(const SimplicialComplex& sub, const SimplicialComplex& of);

class UnionFind {
 public:
  explicit UnionFind(std::size_t n);
  std::size_t find(std::size_t x);
  bool unite(std::size_t a, std::size_t b);
  std::size_t sets() const { return sets_; }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::uint8_t> rank_;
  std::size_t sets_;
};

struct ComponentPartition {
  std::vector<std::uint32_t> id;    // component of each vertex, numbered by first vertex
  std::vector<std::size_t> sizes;
  std::size_t count() const { return sizes.size(); }
  std::size_t largest() const;
};

ComponentPartition components(const SimplicialComplex& complex);

// Words of levels j..k-1, numbered lexicographically (first level most
// significant), so dropping the last digit is division by the last level size.
struct WordSpace {
  int j = 1;
  int k = 1;
  std::vector<std::vector<FlatDigit>> symbols;  // per level, sorted

  std::size_t size() const;
  std::size_t radix(int level) const { return symbols.at(level - j).size(); }
  std::vector<FlatDigit> word(Vertex v) const;
  std::optional<Vertex> index(const std::vector<FlatDigit>& word) const;
};

struct NerveMeta {
  int j = 1;
  int k = 2;
  VerdictMode mode = VerdictMode::Exact;
  std::size_t unknown = 0;  // tuples left undecided
  int maxdim = 1;
  bool maxdim_capped = false;  // capped because the no-corner condition holds
};

struct Nerve {
  WordSpace words;
  SimplicialComplex complex;
  NerveMeta meta;
  std::vector<std::string> labels;
};

}  // namespace nervekit
