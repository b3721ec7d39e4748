#include "phaseless/matrix_io.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>

namespace phaseless {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

void expect_header(std::istream& in, const std::string& header, const char* what) {
  std::string line;
  if (!std::getline(in, line) || line != header)
    throw std::runtime_error(std::string(what) + ": expected header \"" + header + "\"");
}

std::size_t to_index(const std::string& s) { return static_cast<std::size_t>(std::stoull(s)); }

std::string kind_name(IlluminationKind k) {
  switch (k) {
    case IlluminationKind::Single: return "single";
    case IlluminationKind::PairSum: return "pair-sum";
    case IlluminationKind::PairQuadrature: return "pair-quadrature";
    case IlluminationKind::SingularVector: return "singular-vector";
    case IlluminationKind::Custom: break;
  }
  return "custom";
}

}  // namespace

std::string plan_kind_name(PlanKind kind) {
  switch (kind) {
    case PlanKind::Full: return "full";
    case PlanKind::RandomPairs: return "random-pairs";
    case PlanKind::Edges: return "edges";
  }
  return "full";
}

PlanKind parse_plan_kind(const std::string& name) {
  if (name == "full") return PlanKind::Full;
  if (name == "random-pairs") return PlanKind::RandomPairs;
  if (name == "edges") return PlanKind::Edges;
  throw std::invalid_argument("unknown plan kind \"" + name + "\"");
}

void write_matrix_csv(const TimeReversalMatrix& m, std::ostream& out) {
  out << "i,j,re,im,known\n";
  for (Eigen::Index i = 0; i < m.values.rows(); ++i)
    for (Eigen::Index j = 0; j < m.values.cols(); ++j)
      out << i << ',' << j << ',' << num(m.values(i, j).real()) << ',' << num(m.values(i, j).imag()) << ','
          << (m.known(i, j) ? 1 : 0) << '\n';
}

TimeReversalMatrix read_matrix_csv(std::istream& in) {
  expect_header(in, "i,j,re,im,known", "matrix csv");
  std::vector<std::tuple<std::size_t, std::size_t, Complex, bool>> rows;
  std::size_t n = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c = split(line);
    if (c.size() != 5) throw std::runtime_error("matrix csv: malformed row \"" + line + "\"");
    const auto i = to_index(c[0]), j = to_index(c[1]);
    rows.emplace_back(i, j, Complex{std::stod(c[2]), std::stod(c[3])}, c[4] == "1");
    n = std::max({n, i + 1, j + 1});
  }
  if (n == 0) throw std::runtime_error("matrix csv: no entries");
  TimeReversalMatrix m;
  const auto nn = static_cast<Eigen::Index>(n);
  m.values = CMatrix::Zero(nn, nn);
  m.known.setConstant(nn, nn, false);
  for (const auto& [i, j, v, k] : rows) {
    m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
    m.known(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = k;
  }
  for (std::size_t i = 0; i < n; ++i)
    if (m.known(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i))) m.active_set.push_back(i);
  return m;
}

void write_complex_csv(const CMatrix& m, std::ostream& out) {
  out << "i,j,re,im\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      out << i << ',' << j << ',' << num(m(i, j).real()) << ',' << num(m(i, j).imag()) << '\n';
}

CMatrix read_complex_csv(std::istream& in) {
  expect_header(in, "i,j,re,im", "complex csv");
  std::vector<std::tuple<std::size_t, std::size_t, Complex>> rows;
  std::size_t r = 0, cmax = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c = split(line);
    if (c.size() != 4) throw std::runtime_error("complex csv: malformed row \"" + line + "\"");
    const auto i = to_index(c[0]), j = to_index(c[1]);
    rows.emplace_back(i, j, Complex{std::stod(c[2]), std::stod(c[3])});
    r = std::max(r, i + 1);
    cmax = std::max(cmax, j + 1);
  }
  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(cmax));
  for (const auto& [i, j, v] : rows) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
  return m;
}

void write_plan_manifest(const IlluminationPlan& plan, std::ostream& out) {
  out << "# plan," << plan_kind_name(plan.kind) << ',' << plan.num_transducers << '\n';
  out << "illumination_id,tag,kind,first,second\n";
  for (std::size_t k = 0; k < plan.size(); ++k) {
    const auto& f = plan.illuminations[k];
    out << k << ',' << f.tag() << ',' << kind_name(f.kind) << ',' << f.first << ',' << f.second << '\n';
  }
}

IlluminationPlan read_plan_manifest(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("# plan,", 0) != 0)
    throw std::runtime_error("plan manifest: missing \"# plan,<kind>,<N>\" line");
  const auto head = split(line);
  if (head.size() != 3) throw std::runtime_error("plan manifest: malformed plan line");
  const auto kind = parse_plan_kind(head[1]);
  const auto n = to_index(head[2]);
  expect_header(in, "illumination_id,tag,kind,first,second", "plan manifest");

  std::vector<std::size_t> active;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<std::string> tags;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c = split(line);
    if (c.size() != 5) throw std::runtime_error("plan manifest: malformed row \"" + line + "\"");
    if (to_index(c[0]) != tags.size()) throw std::runtime_error("plan manifest: ids out of order");
    tags.push_back(c[1]);
    if (c[2] == "single")
      active.push_back(to_index(c[3]));
    else if (c[2] == "pair-sum")
      pairs.emplace_back(to_index(c[3]), to_index(c[4]));
    else if (c[2] != "pair-quadrature")
      throw std::runtime_error("plan manifest: unsupported illumination kind \"" + c[2] + "\"");
  }
  auto plan = plan_from_pairs(kind, n, std::move(active), pairs);
  if (plan.size() != tags.size()) throw std::runtime_error("plan manifest: illumination count mismatch");
  for (std::size_t k = 0; k < tags.size(); ++k)
    if (plan.illuminations[k].tag() != tags[k])
      throw std::runtime_error("plan manifest: illumination " + std::to_string(k) + " is not in plan order");
  return plan;
}

void write_measurements(const std::vector<IntensityVector>& measurements, std::ostream& out) {
  out << "illumination_id,receiver_index,intensity\n";
  for (std::size_t k = 0; k < measurements.size(); ++k)
    for (Eigen::Index r = 0; r < measurements[k].values.size(); ++r)
      out << k << ',' << r << ',' << num(measurements[k].values(r)) << '\n';
}

std::vector<IntensityVector> read_measurements(std::istream& in) {
  expect_header(in, "illumination_id,receiver_index,intensity", "measurements csv");
  std::map<std::size_t, std::map<std::size_t, double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c = split(line);
    if (c.size() != 3) throw std::runtime_error("measurements csv: malformed row \"" + line + "\"");
    rows[to_index(c[0])][to_index(c[1])] = std::stod(c[2]);
  }
  std::vector<IntensityVector> out(rows.empty() ? 0 : rows.rbegin()->first + 1);
  for (const auto& [id, recv] : rows) {
    if (recv.rbegin()->first + 1 != recv.size())
      throw std::runtime_error("measurements csv: receivers missing for illumination " + std::to_string(id));
    RVector v(static_cast<Eigen::Index>(recv.size()));
    for (const auto& [r, x] : recv) v(static_cast<Eigen::Index>(r)) = x;
    out[id].values = std::move(v);
  }
  for (std::size_t k = 0; k < out.size(); ++k)
    if (out[k].values.size() == 0) throw std::runtime_error("measurements csv: illumination " + std::to_string(k) + " missing");
  return out;
}

std::vector<double> total_powers(const std::vector<IntensityVector>& measurements) {
  std::vector<double> out;
  out.reserve(measurements.size());
  for (const auto& m : measurements) out.push_back(total_power(m));
  return out;
}

void write_gelma_trace(const std::vector<GelmaTraceRow>& trace, std::ostream& out) {
  out << "iteration,relative_residual,j21\n";
  for (const auto& row : trace) out << row.iteration << ',' << num(row.relative_residual) << ',' << num(row.j21) << '\n';
}

}  // namespace phaseless
