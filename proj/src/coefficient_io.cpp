#include "hhd/coefficient_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace hhd {

namespace {

[[noreturn]] void fail(int line, const std::string& what) {
  throw std::runtime_error("coefficient file line " + std::to_string(line) + ": " + what);
}

double parse_double(const std::string& tok, int line) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) fail(line, "bad number '" + tok + "'");
  return v;
}

int parse_int(const std::string& tok, int line) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) fail(line, "bad integer '" + tok + "'");
  return v;
}

std::vector<std::string> tokens(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  for (std::string t; is >> t;) out.push_back(t);
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_coefficients(std::ostream& out, const CoefficientSet& coeffs) {
  const Domain& dom = coeffs.domain();
  const int n = dom.dim();
  out << "# hhd coefficients\n";
  out << "kind " << to_string(coeffs.kind()) << "\n";
  out << "dimension " << n << "\n";
  out << "lengths";
  for (int i = 0; i < n; ++i) out << ' ' << format_double(dom.length(i));
  out << "\nmembers " << coeffs.indices().size() << "\n";
  for (const auto& m : coeffs.indices().members()) {
    for (int i = 0; i < n; ++i) out << (i ? " " : "") << m[i];
    if (m.is_zero()) {
      for (int i = 0; i < n; ++i) out << ' ' << format_double(coeffs.zero_mode()[i]) << " 0";
    } else {
      const int slots = subspace_basis(m, coeffs.kind(), dom).size;
      for (int j = 0; j < slots; ++j) {
        const Complex c = coeffs.reduced_scalar(m, j);
        out << ' ' << format_double(c.real()) << ' ' << format_double(c.imag());
      }
    }
    out << '\n';
  }
}

void write_coefficients(const std::string& path, const CoefficientSet& coeffs) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  write_coefficients(f, coeffs);
  if (!f) throw std::runtime_error("write failed: " + path);
}

CoefficientSet read_coefficients(std::istream& in) {
  std::string text;
  int line_no = 0;
  auto next_line = [&](std::vector<std::string>& toks) {
    while (std::getline(in, text)) {
      ++line_no;
      if (text.empty() || text[0] == '#') continue;
      toks = tokens(text);
      if (!toks.empty()) return true;
    }
    return false;
  };

  std::vector<std::string> t;
  auto expect_key = [&](const char* key) {
    if (!next_line(t) || t[0] != key) fail(line_no, std::string("expected '") + key + "'");
  };

  expect_key("kind");
  if (t.size() != 2) fail(line_no, "kind takes one value");
  ConstraintKind kind;
  if (t[1] == "divergence_free") kind = ConstraintKind::DivergenceFree;
  else if (t[1] == "curl_free") kind = ConstraintKind::CurlFree;
  else fail(line_no, "unknown kind '" + t[1] + "'");

  expect_key("dimension");
  if (t.size() != 2) fail(line_no, "dimension takes one value");
  const int n = parse_int(t[1], line_no);
  if (n != 2 && n != 3) fail(line_no, "dimension must be 2 or 3");

  expect_key("lengths");
  if (static_cast<int>(t.size()) != n + 1) fail(line_no, "expected " + std::to_string(n) + " lengths");
  std::vector<double> lengths;
  for (int i = 0; i < n; ++i) lengths.push_back(parse_double(t[i + 1], line_no));
  const Domain dom(lengths);

  expect_key("members");
  if (t.size() != 2) fail(line_no, "members takes one value");
  const int count = parse_int(t[1], line_no);
  if (count < 0) fail(line_no, "negative member count");

  std::map<MultiIndex, std::pair<int, std::vector<Complex>>> rows;
  for (int r = 0; r < count; ++r) {
    if (!next_line(t)) fail(line_no, "file ends before all members were read");
    if (static_cast<int>(t.size()) < n) fail(line_no, "missing index entries");
    std::vector<int> a;
    for (int i = 0; i < n; ++i) a.push_back(parse_int(t[i], line_no));
    const MultiIndex m = MultiIndex::from_entries(a);
    const int slots = m.is_zero() ? n : subspace_basis(m, kind, dom).size;
    if (static_cast<int>(t.size()) != n + 2 * slots) {
      fail(line_no, "expected " + std::to_string(n + 2 * slots) + " fields");
    }
    std::vector<Complex> vals;
    for (int j = 0; j < slots; ++j) {
      vals.emplace_back(parse_double(t[n + 2 * j], line_no), parse_double(t[n + 2 * j + 1], line_no));
    }
    if (!rows.emplace(m, std::make_pair(line_no, std::move(vals))).second) fail(line_no, "duplicate index");
  }

  IndexSet indices(n);
  for (const auto& [m, row] : rows) {
    if (!rows.count(-m)) fail(row.first, "index has no negated partner");
    indices.insert_pair(m);
  }
  const auto layout = make_layout(kind, dom, indices);
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(layout->size());
  for (const auto& [m, row] : rows) {
    const auto& vals = row.second;
    if (m.is_zero()) {
      for (int i = 0; i < n; ++i) {
        if (vals[i].imag() != 0.0) fail(row.first, "mean components must be real");
        if (kind == ConstraintKind::CurlFree && vals[i].real() != 0.0) {
          fail(row.first, "curl-free fields have zero mean");
        }
        if (layout->has_zero_mode()) theta[i] = vals[i].real();
      }
      continue;
    }
    if (!m.is_canonical()) {
      const auto& partner = rows.at(-m).second;
      for (std::size_t j = 0; j < vals.size(); ++j) {
        if (vals[j] != -std::conj(partner[j])) fail(row.first, "pair values are not conjugate-consistent");
      }
      continue;
    }
    const auto& e = layout->entries()[*layout->find(m)];
    for (std::size_t j = 0; j < vals.size(); ++j) {
      theta[e.offset + 2 * j] = vals[j].real();
      theta[e.offset + 2 * j + 1] = vals[j].imag();
    }
  }
  return CoefficientSet(layout, std::move(theta));
}

CoefficientSet read_coefficients(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  return read_coefficients(f);
}

}  // namespace hhd
