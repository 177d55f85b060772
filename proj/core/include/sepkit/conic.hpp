#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace sepkit {

// Solver-agnostic conic IR: minimize a linear functional over a product of
// real PSD blocks and free vector blocks, subject to sparse linear
// equalities. Complex Hermitian structure is handled one layer up (embed.hpp)
// so backends only ever see real symmetric data.

enum class BlockKind { Free, Psd };

struct BlockDecl {
  BlockKind kind;
  int n;  // Psd: symmetric n x n; Free: vector in R^n
};

// One coefficient of a symmetric matrix, r <= c; represents both (r,c) and
// (c,r). For Free blocks r == c indexes the vector component.
struct SymCoeff {
  std::int32_t r, c;
  double v;
};

struct BlockTerm {
  int block;
  std::vector<SymCoeff> coeffs;
};

struct LinearRow {
  std::vector<BlockTerm> terms;
  double rhs = 0.0;
};

struct ConicProgram {
  std::vector<BlockDecl> blocks;
  std::vector<BlockTerm> objective;  // minimized
  std::vector<LinearRow> equalities;

  int add_psd_block(int n);
  int add_free_block(int n);
  // accumulate an objective coefficient (PSD: symmetric entry; Free: r == c)
  void objective_add(int block, int r, int c, double v);
  int add_row(LinearRow row);

  int psd_dimension_total() const;  // sum of PSD block sides
};

enum class SolveStatus { Optimal, Infeasible, Unbounded, NumericalLimit };

const char* to_string(SolveStatus s);

// When status == Infeasible, dualEqualities holds a Farkas certificate y
// normalized to b.y = 1 whose slack -A^T y lies in the dual cone; when
// Unbounded, primalBlocks holds an improving ray with A x = 0, <c,x> = -1.
struct ConicSolution {
  SolveStatus status = SolveStatus::NumericalLimit;
  std::vector<Eigen::MatrixXd> primalBlocks;  // Free blocks stored as n x 1
  std::vector<Eigen::MatrixXd> dualBlocks;    // dual slack per block
  Eigen::VectorXd dualEqualities;
  double objectiveValue = 0.0;
  double primalResidual = 0.0;
  double dualResidual = 0.0;
  double gap = 0.0;
  int iterations = 0;
};

struct SolverCapabilities {
  int maxPsdBlockSize = 0;
  bool supportsWarmStart = false;
  bool concurrentSolves = false;
};

class SolverBackend {
 public:
  virtual ~SolverBackend() = default;
  virtual SolverCapabilities capabilities() const = 0;
  // Deterministic for identical inputs and tolerance.
  virtual ConicSolution solve(const ConicProgram& prog, double tolerance) const = 0;
};

// Indices of rows that exactly duplicate an earlier row (coefficients and
// rhs bitwise equal). The backend drops these in presolve; their dual
// multipliers are reported as zero.
std::vector<int> duplicate_rows(const ConicProgram& prog);

// Sparse triplet listing for cross-solver validation.
void dump_program(const ConicProgram& prog, std::ostream& os);

// Default backend tolerance used across the library.
inline constexpr double kDefaultSolverTol = 1e-8;

}  // namespace sepkit
