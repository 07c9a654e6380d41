#include "hmp/moments.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hmp/error.hpp"

namespace hmp {

namespace {

using nlohmann::json;

Real parse_real(const json& v) {
  if (v.is_string()) {
    try {
      return Real(v.get<std::string>());
    } catch (const std::exception&) {
      fail(ErrorCode::kFormat, "not a decimal number: \"" + v.get<std::string>() + "\"");
    }
  }
  if (v.is_number_integer()) return Real(v.get<long long>());
  if (v.is_number_unsigned()) return Real(v.get<unsigned long long>());
  if (v.is_number_float()) return Real(v.get<double>());
  fail(ErrorCode::kFormat, "expected a number or decimal string, got " + v.dump());
}

Complex parse_complex(const json& v) {
  if (v.is_array() && v.size() == 2) return Complex(parse_real(v[0]), parse_real(v[1]));
  if (v.is_number() || v.is_string()) return Complex(parse_real(v));
  fail(ErrorCode::kFormat, "expected [re, im], got " + v.dump());
}

}  // namespace

MomentSequence MomentSequence::create(int block_size, std::vector<CMatrix> moments,
                                      unsigned precision_bits,
                                      std::optional<double> herm_tol) {
  if (block_size < 1) fail(ErrorCode::kInvalidArgument, "block size must be positive");
  if (precision_bits < 16) fail(ErrorCode::kInvalidArgument, "precision below 16 bits");
  if (moments.size() < 2)
    fail(ErrorCode::kInsufficientMoments, "at least S_0 and S_1 are required");

  PrecisionScope scope(precision_bits);
  const Real tol = herm_tol ? Real(*herm_tol) : precision_tolerance(precision_bits, 2.0);

  MomentSequence seq;
  seq.block_size_ = block_size;
  seq.precision_bits_ = precision_bits;
  seq.moments_.reserve(moments.size());
  for (std::size_t n = 0; n < moments.size(); ++n) {
    const CMatrix& s = moments[n];
    if (s.rows() != block_size || s.cols() != block_size)
      fail(ErrorCode::kInvalidArgument,
           "moment " + std::to_string(n) + " is not " + std::to_string(block_size) + "x" +
               std::to_string(block_size));
    CMatrix r = rounded(s);
    const CMatrix defect = r - r.adjoint();
    const Real scale = max(Real(1), max_abs(r));
    if (max_abs(defect) > tol * scale)
      fail(ErrorCode::kNonHermitianInput, "moment " + std::to_string(n) + " is not Hermitian");
    const CMatrix sym = (r + r.adjoint()) * Real(0.5);
    seq.moments_.push_back(sym);
  }
  return seq;
}

const CMatrix& MomentSequence::moment(int n) const {
  if (n < 0 || n >= size())
    fail(ErrorCode::kIndexOutOfRange, "moment index " + std::to_string(n) + " out of range");
  return moments_[static_cast<std::size_t>(n)];
}

bool MomentSequence::is_zero() const {
  for (const CMatrix& s : moments_)
    for (Eigen::Index j = 0; j < s.cols(); ++j)
      for (Eigen::Index i = 0; i < s.rows(); ++i)
        if (s(i, j) != Complex(0)) return false;
  return true;
}

Complex hankel_entry(const MomentSequence& seq, int row, int col) {
  const int n = seq.block_size();
  if (row < 0 || col < 0)
    fail(ErrorCode::kIndexOutOfRange, "negative Hankel index");
  const int r = row / n;
  const int t = col / n;
  if (r + t >= seq.size())
    fail(ErrorCode::kIndexOutOfRange,
         "Hankel entry needs S_" + std::to_string(r + t) + " beyond the given moments");
  return seq.moment(r + t)(row % n, col % n);
}

CMatrix gamma_section(const MomentSequence& seq, int m) {
  if (m < 0 || m > seq.max_section())
    fail(ErrorCode::kInsufficientMoments,
         "section " + std::to_string(m) + " exceeds the feasible maximum " +
             std::to_string(seq.max_section()));
  CMatrix g(m, m);
  for (int col = 0; col < m; ++col)
    for (int row = 0; row < m; ++row) g(row, col) = hankel_entry(seq, row, col);
  return g;
}

BlockHankel build_gamma(const MomentSequence& seq, int order) {
  if (order < 0 || 2 * order > seq.size() - 1)
    fail(ErrorCode::kInsufficientMoments,
         "order " + std::to_string(order) + " needs S_" + std::to_string(2 * order));
  return BlockHankel{order, gamma_section(seq, (order + 1) * seq.block_size())};
}

SolvabilityReport validate_solvability(const MomentSequence& seq, std::optional<int> depth,
                                       std::optional<double> epsilon_psd) {
  PrecisionScope scope(seq.precision_bits());
  const int d = depth.value_or(seq.max_order());
  if (d < 0 || 2 * d > seq.size() - 1)
    fail(ErrorCode::kInsufficientMoments, "depth " + std::to_string(d) + " is not feasible");
  const Real eps = epsilon_psd ? Real(*epsilon_psd)
                               : precision_tolerance(seq.precision_bits(), 2.0);

  SolvabilityReport report;
  report.checked_depth = d;
  report.epsilon_psd = to_double(eps);
  for (int order = 0; order <= d; ++order) {
    const BlockHankel g = build_gamma(seq, order);
    const RVector ev = hermitian_eigen(g.entries, false).values;
    const Real lo = ev(0);
    const Real hi = ev(ev.size() - 1);
    report.min_eigenvalue_per_order.push_back(to_double(lo));
    report.max_eigenvalue_per_order.push_back(to_double(hi));
    if (lo < -eps * max(hi, Real(1))) {
      report.verdict = SolvabilityVerdict::kRejected;
      report.rejected_order = order;
      report.checked_depth = order;
      break;
    }
  }
  return report;
}

MomentSequence parse_moment_json(const std::string& text,
                                 std::optional<unsigned> precision_override) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::kFormat, std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("N") || !doc.contains("moments"))
    fail(ErrorCode::kFormat, "moment file needs \"N\" and \"moments\"");
  if (!doc["N"].is_number_integer() || doc["N"].get<long long>() < 1)
    fail(ErrorCode::kFormat, "\"N\" must be a positive integer");
  const int n = doc["N"].get<int>();

  unsigned bits = kDefaultPrecisionBits;
  if (doc.contains("precision_bits")) {
    if (!doc["precision_bits"].is_number_integer() || doc["precision_bits"].get<long long>() < 16)
      fail(ErrorCode::kFormat, "\"precision_bits\" must be an integer >= 16");
    bits = doc["precision_bits"].get<unsigned>();
  }
  if (precision_override) bits = *precision_override;

  const json& list = doc["moments"];
  if (!list.is_array()) fail(ErrorCode::kFormat, "\"moments\" must be an array");

  PrecisionScope scope(bits);
  std::vector<CMatrix> moments;
  moments.reserve(list.size());
  for (const json& m : list) {
    if (!m.is_array() || static_cast<int>(m.size()) != n)
      fail(ErrorCode::kFormat, "each moment must have N rows");
    CMatrix s(n, n);
    for (int i = 0; i < n; ++i) {
      if (!m[i].is_array() || static_cast<int>(m[i].size()) != n)
        fail(ErrorCode::kFormat, "each moment row must have N entries");
      for (int j = 0; j < n; ++j) s(i, j) = parse_complex(m[i][j]);
    }
    moments.push_back(std::move(s));
  }
  try {
    return MomentSequence::create(n, std::move(moments), bits);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kInvalidArgument || e.code() == ErrorCode::kInsufficientMoments)
      fail(ErrorCode::kFormat, e.what());
    throw;
  }
}

MomentSequence read_moment_file(const std::filesystem::path& path,
                                std::optional<unsigned> precision_override) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_moment_json(buf.str(), precision_override);
}

std::string to_moment_json(const MomentSequence& seq) {
  const unsigned bits = seq.precision_bits();
  json moments = json::array();
  for (const CMatrix& s : seq.moments()) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < s.rows(); ++i) {
      json row = json::array();
      for (Eigen::Index j = 0; j < s.cols(); ++j)
        row.push_back({decimal_string(real(s(i, j)), bits), decimal_string(imag(s(i, j)), bits)});
      rows.push_back(std::move(row));
    }
    moments.push_back(std::move(rows));
  }
  json doc;
  doc["N"] = seq.block_size();
  doc["precision_bits"] = bits;
  doc["moments"] = std::move(moments);
  return doc.dump(2) + "\n";
}

}  // namespace hmp
