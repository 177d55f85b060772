#include "sepkit/conic.hpp"

#include <map>
#include <ostream>
#include <stdexcept>

namespace sepkit {

int ConicProgram::add_psd_block(int n) {
  if (n < 1) throw std::invalid_argument("add_psd_block: n must be >= 1");
  blocks.push_back({BlockKind::Psd, n});
  return static_cast<int>(blocks.size()) - 1;
}

int ConicProgram::add_free_block(int n) {
  if (n < 1) throw std::invalid_argument("add_free_block: n must be >= 1");
  blocks.push_back({BlockKind::Free, n});
  return static_cast<int>(blocks.size()) - 1;
}

void ConicProgram::objective_add(int block, int r, int c, double v) {
  if (block < 0 || block >= static_cast<int>(blocks.size()))
    throw std::invalid_argument("objective_add: no such block");
  if (blocks[block].kind == BlockKind::Free && r != c)
    throw std::invalid_argument("objective_add: free coefficients use r == c");
  if (r > c) std::swap(r, c);
  for (auto& t : objective)
    if (t.block == block) {
      for (auto& e : t.coeffs)
        if (e.r == r && e.c == c) {
          e.v += v;
          return;
        }
      t.coeffs.push_back({r, c, v});
      return;
    }
  objective.push_back({block, {{r, c, v}}});
}

int ConicProgram::add_row(LinearRow row) {
  for (auto& t : row.terms) {
    if (t.block < 0 || t.block >= static_cast<int>(blocks.size()))
      throw std::invalid_argument("add_row: row references undeclared block");
    const auto& decl = blocks[t.block];
    for (auto& e : t.coeffs) {
      if (e.r > e.c) std::swap(e.r, e.c);
      if (e.c >= decl.n)
        throw std::invalid_argument("add_row: coefficient index out of range");
      if (decl.kind == BlockKind::Free && e.r != e.c)
        throw std::invalid_argument("add_row: free coefficients use r == c");
    }
  }
  equalities.push_back(std::move(row));
  return static_cast<int>(equalities.size()) - 1;
}

int ConicProgram::psd_dimension_total() const {
  int total = 0;
  for (const auto& b : blocks)
    if (b.kind == BlockKind::Psd) total += b.n;
  return total;
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "OPTIMAL";
    case SolveStatus::Infeasible: return "INFEASIBLE";
    case SolveStatus::Unbounded: return "UNBOUNDED";
    case SolveStatus::NumericalLimit: return "NUMERICAL_LIMIT";
  }
  return "?";
}

namespace {
struct RowKey {
  std::vector<std::tuple<int, std::int32_t, std::int32_t, double>> entries;
  double rhs;
  bool operator<(const RowKey& o) const {
    if (rhs != o.rhs) return rhs < o.rhs;
    return entries < o.entries;
  }
};

RowKey key_of(const LinearRow& row) {
  RowKey k;
  k.rhs = row.rhs;
  for (const auto& t : row.terms)
    for (const auto& e : t.coeffs)
      if (e.v != 0.0) k.entries.emplace_back(t.block, e.r, e.c, e.v);
  std::sort(k.entries.begin(), k.entries.end());
  return k;
}
}  // namespace

std::vector<int> duplicate_rows(const ConicProgram& prog) {
  std::vector<int> dups;
  std::map<RowKey, int> seen;
  for (int i = 0; i < static_cast<int>(prog.equalities.size()); ++i) {
    auto [it, inserted] = seen.emplace(key_of(prog.equalities[i]), i);
    if (!inserted) dups.push_back(i);
  }
  return dups;
}

void dump_program(const ConicProgram& prog, std::ostream& os) {
  os << "blocks " << prog.blocks.size() << "\n";
  for (size_t k = 0; k < prog.blocks.size(); ++k)
    os << "  " << k << " " << (prog.blocks[k].kind == BlockKind::Psd ? "psd" : "free")
       << " " << prog.blocks[k].n << "\n";
  os << "objective\n";
  for (const auto& t : prog.objective)
    for (const auto& e : t.coeffs)
      os << "  " << t.block << " " << e.r << " " << e.c << " " << e.v << "\n";
  os << "rows " << prog.equalities.size() << "\n";
  for (size_t i = 0; i < prog.equalities.size(); ++i) {
    os << "row " << i << " rhs " << prog.equalities[i].rhs << "\n";
    for (const auto& t : prog.equalities[i].terms)
      for (const auto& e : t.coeffs)
        os << "  " << t.block << " " << e.r << " " << e.c << " " << e.v << "\n";
  }
}

}  // namespace sepkit
