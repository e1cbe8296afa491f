#pragma once

#include "nervekit/affine1d.hpp"
#include "nervekit/complex.hpp"
#include "nervekit/contact.hpp"
#include "nervekit/kernels.hpp"

#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

namespace nervekit {

// Cell corners of every word of levels j..k-1, one int32 array per axis, in
// vertex order.
struct LatticeBlock {
  int depth = 0;
  std::vector<std::int32_t> extent;                // n_k^depth
  std::vector<std::vector<std::int32_t>> coords;  // coords[axis][vertex]

  std::size_t size() const { return coords.empty() ? 0 : coords[0].size(); }
};

// Built back to front: prepending digit c to every word adds c * n^depth.
LatticeBlock build_block(const GridIfs& ifs, int j, int k,
                         const kernels::Table& kt = kernels::active());

// Vertex lookup by lattice corner: a dense table for small lattices, a hash
// map otherwise.
class LatticeIndex {
 public:
  static constexpr std::uint64_t kDenseLimit = std::uint64_t{1} << 25;

  explicit LatticeIndex(const LatticeBlock& block, const kernels::Table& kt = kernels::active(),
                        std::uint64_t dense_limit = kDenseLimit);

  bool dense() const { return !table_.empty(); }
  // out[v] = vertex at corner(v) + offset, or -1.
  void probe(const std::vector<std::int32_t>& offset, std::vector<std::int32_t>& out) const;

 private:
  std::uint64_t key(const std::int32_t* c) const;

  const LatticeBlock& block_;
  const kernels::Table& kt_;
  std::vector<std::int32_t> table_;
  std::vector<std::int32_t> stride_;
  std::unordered_map<std::uint64_t, std::int32_t> sparse_;
};

std::size_t default_cell_budget();  // 5e6, or NERVE_CELL_BUDGET

struct NerveOptions {
  int maxdim = -1;  // -1: 2^d - 1
  VerdictMode mode = VerdictMode::Exact;
  bool auto_cap = true;  // d = 2 and no corners: stop at edges
  std::size_t cell_budget = default_cell_budget();
  bool labels = true;
  AffineBudget affine;
};

class NerveEngine {
 public:
  explicit NerveEngine(GridIfs ifs, int max_arity = 0);

  const GridIfs& ifs() const { return *ifs_; }
  const ContactAutomaton& automaton() const { return *automaton_; }
  bool no_corner() const { return no_corner_; }

  // N_{j,k}.  Throws BudgetExceeded above the cell budget and
  // std::runtime_error for undecided tuples in exact mode.
  Nerve build(int j, int k, const NerveOptions& opts = {}) const;

 private:
  std::unique_ptr<GridIfs> ifs_;
  std::unique_ptr<ContactAutomaton> automaton_;
  bool no_corner_ = false;
};

Nerve build_nerve(const GridIfs& ifs, int j, int k, const NerveOptions& opts = {});
Nerve build_nerve(const AffineSystem1D& sys, int j, int k, const NerveOptions& opts = {});

std::string grid_label(const GridIfs& ifs, const std::vector<FlatDigit>& word);
std::string affine_label(const AffineSystem1D& sys, const std::vector<FlatDigit>& word);

struct SimplicialMap {
  const Nerve* domain = nullptr;
  const Nerve* codomain = nullptr;
  std::vector<Vertex> vertex;
};

// N_{j,k+1} -> N_{j,k}, dropping the last digit.
SimplicialMap projection_phi(const Nerve& fine, const Nerve& coarse);
// N_{k,l} -> N_{j,l}, prefixing u (levels j..k-1).
SimplicialMap embed_xi(const Nerve& tail, const Nerve& whole, const std::vector<FlatDigit>& u);

bool is_simplicial(const SimplicialMap& map);
// Every q-simplex of the codomain is the image of a q-simplex.
bool simplex_surjective(const SimplicialMap& map);
bool vertex_injective(const SimplicialMap& map);

// M_{j,k,l}: union of the images of N_{k,l} under all prefixes u.
SimplicialComplex subcomplex_M(const Nerve& whole, const Nerve& tail);

// Component of the image for each domain component; throws std::logic_error
// if the map is not well defined on components.
std::vector<std::uint32_t> component_map(const SimplicialMap& map, const ComponentPartition& dom,
                                         const ComponentPartition& cod);
bool onto(const std::vector<std::uint32_t>& cmap, std::size_t codomain_count);
bool bijective(const std::vector<std::uint32_t>& cmap, std::size_t codomain_count);

struct ConnectivityRow {
  int k = 0;
  std::size_t components_1k = 0;  // N_{1,k}
  std::size_t components_kk1 = 0;  // N_{k,k+1}
};

struct ConnectivityReport {
  std::vector<ConnectivityRow> rows;
  bool connected_all = true;        // every N_{1,k} connected
  std::size_t level_connected = 0;  // k with N_{k,k+1} connected
  bool level_connected_all = true;
};

ConnectivityReport connectivity_report(const NerveEngine& engine, int kmax,
                                       const NerveOptions& opts = {});

// c^{k-1} times the largest component size of N_{1,k}.
Rational disconnection_certificate(const GridIfs& ifs, int k, const ComponentPartition& part);
Rational disconnection_certificate(const NerveEngine& engine, int k, const NerveOptions& opts = {});

struct CutAudit {
  bool cut = false;
  int digit = -1;
  std::size_t components = 0;
  std::size_t violations = 0;
  Rational widest;  // largest projected span
  Rational bound;   // (n-1)/n^j + 2/n^{m-1}
};

// Axis projections of the components of N_{1,m} against a cut at level j.
CutAudit cut_projection_audit(const NerveEngine& engine, int m, int j, int axis,
                              const NerveOptions& opts = {});

std::string to_dot(const Nerve& nerve);

}  // namespace nervekit
