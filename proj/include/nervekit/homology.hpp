#pragma once

#include "nervekit/nerve.hpp"
#include "nervekit/smith.hpp"

#include <array>
#include <string>
#include <vector>

namespace nervekit {

// Rows = (q-1)-simplices, columns = q-simplices; the face without vertex i
// carries sign (-1)^i.  Empty (0 columns) above the complex dimension.
SparseMatrix boundary_matrix(const SimplicialComplex& complex, int q);

enum class HomologyMethod { Auto, Snf, Fast };

struct BettiReport {
  std::vector<std::size_t> betti;
  std::vector<std::vector<BigInt>> torsion;  // torsion of H_q
  std::string method;                        // union-find+euler-graph | snf
  NerveMeta meta;
};

// Auto: H_0 by union-find and H_1 = E - V + C on graphs, Smith form
// otherwise.  Fast refuses complexes with 2-simplices.
BettiReport betti(const SimplicialComplex& complex, HomologyMethod method = HomologyMethod::Auto);
BettiReport betti(const Nerve& nerve, HomologyMethod method = HomologyMethod::Auto);

struct RelativeReport {
  std::vector<std::size_t> betti;
  std::vector<std::vector<BigInt>> torsion;
  // q = 1 basis when N is a graph on the vertices of M: the edges of N not in M
  std::vector<std::pair<Vertex, Vertex>> basis;
};

// Homology of C(N)/C(M); M must be a subcomplex of N on the same vertices.
RelativeReport relative_betti(const SimplicialComplex& n, const SimplicialComplex& m);

bool digits_adjacent(const GridIfs& ifs, FlatDigit a, FlatDigit b);

struct CrossEdge {
  Vertex a, b;
  bool adjacent;  // first digits share a face
};

// Edges of N_{j,l} whose endpoints differ in the first digit.
std::vector<CrossEdge> cross_edge_basis(const GridIfs& ifs, const Nerve& nerve);

struct RecursionReport {
  bool hypothesis = false;  // d = 2 and no corner
  long long lhs = 0;        // rank H_1(N_{j,l}) - rank H_0(N_{j,l})
  long long rhs = 0;        // #I^(j) (rank H_1 - rank H_0)(N_{j+1,l}) + #cross edges
  std::size_t cross = 0;
  bool equal() const { return lhs == rhs; }
};

RecursionReport rank_recursion_check(const NerveEngine& engine, int j, int l,
                                     HomologyMethod method = HomologyMethod::Snf,
                                     const NerveOptions& opts = {});

struct ExactSequenceReport {
  // h[q] = {rank H_q(M), rank H_q(N), rank H_q(N,M)}
  std::vector<std::array<std::size_t, 3>> ranks;
  long long six_term = 0;  // alternating sum from H_1(M) to H_0(N,M)
  long long full = 0;      // alternating sum over every q
  bool six_term_applies = false;  // H_2(N,M) = 0
  bool ok() const { return full == 0 && (!six_term_applies || six_term == 0); }
};

ExactSequenceReport exact_sequence_audit(const SimplicialComplex& n, const SimplicialComplex& m);

// Rank over Q of the map induced on H_1.
std::size_t induced_h1_rank(const SimplicialMap& map);

struct TraceRow {
  int k = 0;
  std::size_t betti = 0;     // rank H_q(N_{1,k})
  bool torsion = false;
  long long induced = -1;    // rank of H_q(N_{1,k+1}) -> H_q(N_{1,k}); -1 on the last stage
  bool components_bijective = false;
};

struct CechSumiTrace {
  int q = 0;
  std::vector<TraceRow> rows;
  bool stabilized = false;  // component maps bijective from some stage on
};

// Finite stages only; not the inverse limit itself.
CechSumiTrace cech_sumi_trace(const NerveEngine& engine, int kmax, int q, const NerveOptions& opts = {});

// Lower bound obtained by unrolling the rank recursion (d = 2, no corners):
// rank H_1(N_{1,l}) - rank H_0(N_{1,l}) >= prod_{t=1}^{l-2} #I^(t) * (rank H_1 - rank H_0)(N_{l-1,l}).
struct LowerBoundReport {
  long long lhs = 0;
  BigInt rhs = 0;
  bool holds() const { return BigInt(lhs) >= rhs; }
};
LowerBoundReport recursion_lower_bound(const NerveEngine& engine, int l, const NerveOptions& opts = {});

}  // namespace nervekit
