#include "cw4/params.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

#include <fmt/format.h>

namespace cw4 {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_real(std::string_view s, int line) {
  s = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
    throw ParseError(line, "expected a decimal number, got '" + std::string(s) + "'");
  return v;
}

std::vector<int> parse_indices(std::string_view s, int line) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const auto comma = s.find(',', pos);
    const auto piece = trim(s.substr(pos, comma == std::string_view::npos ? s.npos : comma - pos));
    int v = 0;
    const auto [ptr, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), v);
    if (piece.empty() || ec != std::errc() || ptr != piece.data() + piece.size())
      throw ParseError(line, "bad index list '" + std::string(s) + "'");
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

void check_unit(double v, const std::string& key, int line) {
  if (v < 0.0 || v > 1.0) throw ParseError(line, key + " = " + fmt::format("{}", v) + " is outside [0,1]");
}

struct Seen {
  double value;
  int line;
};

}  // namespace

ParameterSet parse_parameters(std::string_view text) {
  ParameterSet p;
  std::optional<Seen> q, kappa, b, btilde;
  // Keys as written (possibly mirrored), to detect duplicates.
  std::map<std::string, int> written;
  std::map<int, Seen> alpha;                      // canonical index
  std::map<std::pair<int, int>, Seen> g;          // (canonical index, slot)

  auto record = [](auto& store, const auto& key, double value, int line, const std::string& name) {
    const auto it = store.find(key);
    if (it == store.end()) {
      store.emplace(key, Seen{value, line});
    } else if (it->second.value != value) {
      throw ParseError(line, name + " conflicts with its y/z mirror on line " +
                                 std::to_string(it->second.line));
    }
  };

  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto eol = text.find('\n', pos);
    auto line = text.substr(pos, eol == std::string_view::npos ? text.npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() : eol + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    const auto value_text = line.substr(eq + 1);
    std::string key_norm;
    for (char c : key)
      if (c != ' ' && c != '\t') key_norm += c;
    if (!written.emplace(key_norm, line_no).second)
      throw ParseError(line_no, "duplicate key '" + key_norm + "'");

    auto scalar = [&](std::optional<Seen>& slot) { slot = Seen{parse_real(value_text, line_no), line_no}; };

    if (key_norm == "q") {
      const double v = parse_real(value_text, line_no);
      if (v < 1 || v != std::floor(v) || v > 1e6) throw ParseError(line_no, "q must be a positive integer");
      q = Seen{v, line_no};
    } else if (key_norm == "kappa") {
      scalar(kappa);
      if (kappa->value < 0) throw ParseError(line_no, "kappa must be non-negative");
    } else if (key_norm == "b") {
      scalar(b);
      check_unit(b->value, "b", line_no);
    } else if (key_norm == "btilde") {
      scalar(btilde);
      check_unit(btilde->value, "btilde", line_no);
    } else if (key_norm.starts_with("alpha[") && key_norm.ends_with("]")) {
      const auto idx = parse_indices(std::string_view(key_norm).substr(6, key_norm.size() - 7), line_no);
      if (idx.size() != 3) throw ParseError(line_no, "alpha takes three indices");
      const TripleIndex t{idx[0], idx[1], idx[2]};
      if (!in_s8(t)) throw ParseError(line_no, "alpha index " + t.label() + " is not in S8");
      const double v = parse_real(value_text, line_no);
      check_unit(v, key_norm, line_no);
      record(alpha, canonical_index(t), v, line_no, key_norm);
    } else if (key_norm.starts_with("g[") && key_norm.ends_with("]")) {
      const auto idx = parse_indices(std::string_view(key_norm).substr(2, key_norm.size() - 3), line_no);
      if (idx.size() != 4) throw ParseError(line_no, "g takes four indices");
      const TripleIndex t{idx[0], idx[1], idx[2]};
      if (!in_s8(t)) throw ParseError(line_no, "g component " + t.label() + " is not in S8");
      if (idx[3] < 1 || idx[3] > slot_count(t))
        throw ParseError(line_no, "component " + t.label() + " has no slot " + std::to_string(idx[3]));
      const double v = parse_real(value_text, line_no);
      check_unit(v, key_norm, line_no);
      record(g, std::pair{canonical_index(t), idx[3]}, v, line_no, key_norm);
    } else {
      throw ParseError(line_no, "unknown key '" + key_norm + "'");
    }
  }

  auto require = [](const std::optional<Seen>& s, const char* name) {
    if (!s) throw ParseError(0, std::string("missing key '") + name + "'");
    return s->value;
  };
  p.q = static_cast<int>(require(q, "q"));
  p.kappa = require(kappa, "kappa");
  p.b = require(b, "b");
  p.btilde = require(btilde, "btilde");

  const auto& canon = canonical_triples();
  for (int c = 0; c < kCanonicalSize; ++c) {
    const auto& t = canon[c];
    const auto a = alpha.find(c);
    if (a == alpha.end())
      throw ParseError(0, fmt::format("missing key 'alpha[{},{},{}]'", t.i, t.j, t.k));
    p.alpha[c] = a->second.value;
    for (int l = 1; l <= slot_count(t); ++l) {
      const auto it = g.find({c, l});
      if (it == g.end())
        throw ParseError(0, fmt::format("missing key 'g[{},{},{},{}]'", t.i, t.j, t.k, l));
      p.g[c][l - 1] = it->second.value;
    }
  }
  return p;
}

std::string serialize_parameters(const ParameterSet& p) {
  std::string out;
  out += fmt::format("q = {}\n", p.q);
  out += fmt::format("kappa = {:.17g}\n", p.kappa);
  out += fmt::format("b = {:.17g}\n", p.b);
  out += fmt::format("btilde = {:.17g}\n", p.btilde);
  const auto& canon = canonical_triples();
  for (int c = 0; c < kCanonicalSize; ++c) {
    const auto& t = canon[c];
    out += fmt::format("alpha[{},{},{}] = {:.17g}\n", t.i, t.j, t.k, p.alpha[c]);
  }
  for (int c = 0; c < kCanonicalSize; ++c) {
    const auto& t = canon[c];
    for (int l = 1; l <= slot_count(t); ++l)
      out += fmt::format("g[{},{},{},{}] = {:.17g}\n", t.i, t.j, t.k, l, p.g[c][l - 1]);
  }
  return out;
}

ParameterSet read_parameter_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(0, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_parameters(buf.str());
}

void write_parameter_file(const std::filesystem::path& path, const ParameterSet& p, std::string_view header) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  std::size_t pos = 0;
  while (pos < header.size()) {
    const auto eol = header.find('\n', pos);
    out << "# " << header.substr(pos, eol == std::string_view::npos ? header.npos : eol - pos) << '\n';
    if (eol == std::string_view::npos) break;
    pos = eol + 1;
  }
  out << serialize_parameters(p);
}

ExpandedParams expand(const ParameterSet& p) {
  ExpandedParams e;
  e.q = p.q;
  e.kappa = p.kappa;
  e.b = p.b;
  e.btilde = p.btilde;
  for (const auto& t : s8_triples()) {
    const int s = s8_index(t);
    const int c = canonical_index(t);
    e.alpha[s] = p.alpha[c];
    e.g[s] = p.g[c];
  }
  return e;
}

ParameterSet project_c1_d2(const ParameterSet& p) {
  ParameterSet out = p;
  double mass = 0.0;
  const auto& canon = canonical_triples();
  for (int c = 0; c < kCanonicalSize; ++c) {
    const auto& t = canon[c];
    mass += p.alpha[c] * (t.j == t.k ? 1.0 : 2.0);
    const auto& tmpl = subcomponent_template(t);
    double s = 0.0;
    for (int l = 1; l <= tmpl.slot_count(); ++l) s += tmpl.slot_multiplicity(l) * p.g[c][l - 1];
    if (s > 0.0)
      for (int l = 1; l <= tmpl.slot_count(); ++l) out.g[c][l - 1] = p.g[c][l - 1] / s;
  }
  if (mass > 0.0)
    for (auto& a : out.alpha) a /= mass;
  return out;
}

}  // namespace cw4
