#include "sepkit/state_io.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace sepkit {

namespace {
using nlohmann::json;

json complex_to_json(const Complex& z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

Complex complex_from_json(const json& j) {
  return Complex(j.at("re").get<double>(), j.at("im").get<double>());
}

json matrix_to_json(const CMat& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

CMat matrix_from_json(const json& j) {
  const auto rows = j.size();
  if (rows == 0) throw std::invalid_argument("matrix json: empty");
  const auto cols = j.at(0).size();
  CMat m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (size_t r = 0; r < rows; ++r) {
    if (j.at(r).size() != cols) throw std::invalid_argument("matrix json: ragged rows");
    for (size_t c = 0; c < cols; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          complex_from_json(j.at(r).at(c));
  }
  return m;
}

json vector_to_json(const CVec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

CVec vector_from_json(const json& j) {
  CVec v(static_cast<Eigen::Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = complex_from_json(j.at(i));
  return v;
}

json read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  return json::parse(f);
}

void write_file(const json& j, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << j.dump(2) << "\n";
}
}  // namespace

BipartiteOperator load_state_json(const std::string& path) {
  const json j = read_file(path);
  const int dA = j.at("dA").get<int>();
  const int dB = j.at("dB").get<int>();
  CMat m = matrix_from_json(j.at("matrix"));
  if (!is_hermitian(m))
    throw std::runtime_error("state file " + path + ": matrix is not Hermitian");
  return BipartiteOperator(hermitize(m), dA, dB);
}

void save_state_json(const BipartiteOperator& op, const std::string& path) {
  write_file(json{{"dA", op.dA}, {"dB", op.dB}, {"matrix", matrix_to_json(op.mat)}}, path);
}

std::vector<EnsembleTerm> load_ensemble_json(const std::string& path) {
  const json j = read_file(path);
  std::vector<EnsembleTerm> out;
  for (const auto& t : j.at("terms"))
    out.push_back({t.at("p").get<double>(), vector_from_json(t.at("psiPrime")),
                   vector_from_json(t.at("psi"))});
  return out;
}

void save_ensemble_json(const std::vector<EnsembleTerm>& ensemble, const std::string& path) {
  json terms = json::array();
  for (const auto& t : ensemble)
    terms.push_back(json{{"p", t.p},
                         {"psiPrime", vector_to_json(t.psiPrime)},
                         {"psi", vector_to_json(t.psi)}});
  write_file(json{{"terms", std::move(terms)}}, path);
}

void save_decomposition_json(const SeparableDecomposition& decomp, const std::string& path) {
  json terms = json::array();
  for (const auto& t : decomp.terms)
    terms.push_back(json{{"weight", t.weight},
                         {"aOperator", matrix_to_json(t.aOperator)},
                         {"bStateVector", vector_to_json(t.bVector)}});
  write_file(json{{"dA", decomp.dA},
                  {"dB", decomp.dB},
                  {"residualTraceNorm", decomp.residualTraceNorm},
                  {"normalizationConstant", decomp.normalizationConstant},
                  {"terms", std::move(terms)}},
             path);
}

void save_matrix_json(const CMat& m, const std::string& path) {
  write_file(json{{"rows", m.rows()}, {"cols", m.cols()}, {"matrix", matrix_to_json(m)}},
             path);
}

CMat load_matrix_json(const std::string& path) {
  return matrix_from_json(read_file(path).at("matrix"));
}

}  // namespace sepkit
