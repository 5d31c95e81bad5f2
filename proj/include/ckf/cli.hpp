#pragma once

// Command implementations behind the `ckf` tool. Each run_* function is pure:
// it returns the text for stdout and stderr plus the exit status, so the
// commands can be tested without spawning a process.

#include <cctype>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "ckf/abelian.hpp"
#include "ckf/bundle.hpp"
#include "ckf/ck.hpp"
#include "ckf/error.hpp"
#include "ckf/intmat.hpp"
#include "ckf/sft.hpp"

namespace ckf::cli {

using json = nlohmann::json;

inline constexpr int kExitOk = 0;
/// compare / searches: the pair is provably different.
inline constexpr int kExitDistinct = 1;
/// compare / searches: bounded search found nothing and no invariant separates.
inline constexpr int kExitInconclusive = 2;
/// invariants: report printed, but the matrix is not in GL_n(Z).
inline constexpr int kExitPartial = 3;
/// Bad input or a violated precondition.
inline constexpr int kExitError = 4;

/// Matrices above this size are accepted with a warning.
inline constexpr std::size_t kLargeMatrixWarning = 12;

enum class OutputFormat { Text, Json };

inline OutputFormat parse_format(std::string_view s) {
  if (s == "text") return OutputFormat::Text;
  if (s == "json" || s == "json-like") return OutputFormat::Json;
  throw ParseError("unknown format '" + std::string(s) + "' (expected text or json)");
}

struct CommandResult {
  int exit_code = kExitOk;
  std::string out;
  std::string err;
};

// ---------------------------------------------------------------------------
// Integers and matrices in JSON. Values that fit in 64 bits are numbers;
// larger ones are decimal strings.

namespace detail {

inline bool is_decimal(std::string_view s) {
  std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

}  // namespace detail

inline json integer_to_json(const Integer& x) {
  if (x >= std::numeric_limits<std::int64_t>::min() &&
      x <= std::numeric_limits<std::int64_t>::max()) {
    return x.convert_to<std::int64_t>();
  }
  return x.str();
}

inline Integer integer_from_json(const json& j) {
  if (j.is_number_unsigned()) return Integer(j.get<std::uint64_t>());
  if (j.is_number_integer()) return Integer(j.get<std::int64_t>());
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (detail::is_decimal(s)) return Integer(s[0] == '+' ? s.substr(1) : s);
  }
  throw ParseError("non-integer value " + j.dump());
}

inline json matrix_to_json(const IntMatrix& a) {
  json rows = json::array();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < a.cols(); ++j) row.push_back(integer_to_json(a(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline IntMatrix matrix_from_json(const json& rows) {
  if (!rows.is_array() || rows.empty()) throw ParseError("\"rows\" must be a non-empty list");
  std::vector<std::vector<Integer>> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const json& row = rows[i];
    if (!row.is_array() || row.empty()) {
      throw ParseError("row " + std::to_string(i + 1) + " must be a non-empty list");
    }
    std::vector<Integer> values;
    for (const auto& x : row) values.push_back(integer_from_json(x));
    if (!out.empty() && values.size() != out.front().size()) {
      throw ParseError("ragged rows: row " + std::to_string(i + 1) + " has " +
                       std::to_string(values.size()) + " entries, expected " +
                       std::to_string(out.front().size()));
    }
    out.push_back(std::move(values));
  }
  return IntMatrix::from_rows(out);
}

/// Accepts either plain text (one row per line, whitespace separated
/// integers) or an object {"rows": [[...], ...]}. Blank lines are skipped.
inline IntMatrix parse_matrix(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) throw ParseError("empty input");

  if (text[first] == '{') {
    json doc;
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("malformed structured input: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("rows")) {
      throw ParseError("structured input needs a \"rows\" key");
    }
    return matrix_from_json(doc["rows"]);
  }

  std::vector<std::vector<Integer>> rows;
  std::istringstream lines{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    std::istringstream tokens(line);
    std::string token;
    std::vector<Integer> row;
    while (tokens >> token) {
      if (!detail::is_decimal(token)) throw ParseError("not an integer: '" + token + "'", line_no);
      row.emplace_back(token[0] == '+' ? token.substr(1) : token);
    }
    if (row.empty()) continue;
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError("ragged rows: expected " + std::to_string(rows.front().size()) +
                           " entries, found " + std::to_string(row.size()),
                       line_no);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("empty input");
  return IntMatrix::from_rows(rows);
}

// ---------------------------------------------------------------------------
// Invariant report

/// Everything `ckf invariants` prints. K-theory fields use the sign-normalized
/// matrix; k0_raw/k1_raw use the input as given. Bundle fields are absent when
/// the input is not in GL_n(Z); irreducible/primitive are absent when the
/// normalized matrix has a negative entry.
struct InvariantReport {
  IntMatrix matrix;
  Integer det;
  Integer trace;
  bool normalized = false;
  FgAbelianGroup k0;
  FgAbelianGroup k1;
  FgAbelianGroup k0_raw;
  FgAbelianGroup k1_raw;
  FgAbelianGroup bowen_franks;
  std::optional<FgAbelianGroup> h1;
  std::optional<IntPolynomial> alexander;
  std::optional<bool> irreducible;
  std::optional<bool> primitive;
  std::optional<bool> theorem1_check;

  friend bool operator==(const InvariantReport&, const InvariantReport&) = default;
};

inline InvariantReport make_report(const IntMatrix& a) {
  require_square(a, "invariants");
  const Integer tr = trace(a);
  const bool flip = tr < 0;
  const IntMatrix work = flip ? -a : a;

  InvariantReport r{a, det(a), tr, flip, k0(work), k1(work), k0(a), k1(a), bowen_franks(work),
                    {}, {}, {}, {}, {}};
  if (r.det == 1 || r.det == -1) {
    const TorusBundle b(a);
    r.h1 = ckf::h1(b);
    r.alexander = alexander_polynomial(b);
    r.theorem1_check = ckf::theorem1_check(b);
  }
  if (is_nonnegative(work)) {
    r.irreducible = is_irreducible(work);
    r.primitive = is_primitive(work);
  }
  return r;
}

inline json report_to_json(const InvariantReport& r) {
  auto group = [](const std::optional<FgAbelianGroup>& g) -> json {
    return g ? json(format_group(*g)) : json(nullptr);
  };
  auto flag = [](const std::optional<bool>& b) -> json { return b ? json(*b) : json(nullptr); };
  return json{
      {"matrix", matrix_to_json(r.matrix)},
      {"det", integer_to_json(r.det)},
      {"trace", integer_to_json(r.trace)},
      {"normalized", r.normalized},
      {"k0", format_group(r.k0)},
      {"k1", format_group(r.k1)},
      {"k0_raw", format_group(r.k0_raw)},
      {"k1_raw", format_group(r.k1_raw)},
      {"bowen_franks", format_group(r.bowen_franks)},
      {"h1", group(r.h1)},
      {"alexander", r.alexander ? json(format_polynomial(*r.alexander)) : json(nullptr)},
      {"irreducible", flag(r.irreducible)},
      {"primitive", flag(r.primitive)},
      {"theorem1_check", flag(r.theorem1_check)},
  };
}

inline InvariantReport report_from_json(const json& j) {
  try {
    auto required = [&](const char* key) { return parse_group(j.at(key).get<std::string>()); };
    auto group = [&](const char* key) -> std::optional<FgAbelianGroup> {
      if (j.at(key).is_null()) return std::nullopt;
      return required(key);
    };
    auto flag = [&](const char* key) -> std::optional<bool> {
      if (j.at(key).is_null()) return std::nullopt;
      return j.at(key).get<bool>();
    };
    InvariantReport r{matrix_from_json(j.at("matrix")),
                      integer_from_json(j.at("det")),
                      integer_from_json(j.at("trace")),
                      j.at("normalized").get<bool>(),
                      required("k0"),
                      required("k1"),
                      required("k0_raw"),
                      required("k1_raw"),
                      required("bowen_franks"),
                      {}, {}, {}, {}, {}};
    r.h1 = group("h1");
    if (!j.at("alexander").is_null()) {
      r.alexander = parse_polynomial(j.at("alexander").get<std::string>());
    }
    r.irreducible = flag("irreducible");
    r.primitive = flag("primitive");
    r.theorem1_check = flag("theorem1_check");
    return r;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed report: ") + e.what());
  }
}

inline std::string render_text(const InvariantReport& r) {
  std::ostringstream out;
  auto line = [&](const char* key, const std::string& value) {
    out << key << ':' << std::string(16 - std::string_view(key).size(), ' ') << value << '\n';
  };
  auto flag = [](const std::optional<bool>& b) {
    return b ? std::string(*b ? "true" : "false") : std::string("absent");
  };
  line("matrix", to_string(r.matrix));
  line("det", r.det.str());
  line("trace", r.trace.str());
  line("normalized", r.normalized ? "true" : "false");
  line("k0", format_group(r.k0));
  line("k1", format_group(r.k1));
  line("k0_raw", format_group(r.k0_raw));
  line("k1_raw", format_group(r.k1_raw));
  line("bowen_franks", format_group(r.bowen_franks));
  line("h1", r.h1 ? format_group(*r.h1) : "absent");
  line("alexander", r.alexander ? format_polynomial(*r.alexander) : "absent");
  line("irreducible", flag(r.irreducible));
  line("primitive", flag(r.primitive));
  line("theorem1_check", flag(r.theorem1_check));
  return out.str();
}

// ---------------------------------------------------------------------------
// Commands

namespace detail {

inline void warn_if_large(const IntMatrix& a, CommandResult& res) {
  if (a.rows() > kLargeMatrixWarning || a.cols() > kLargeMatrixWarning) {
    res.err += "warning: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
               " matrix; searches may be slow\n";
  }
}

inline std::string render(const json& j, OutputFormat format, const std::string& text) {
  return format == OutputFormat::Json ? j.dump(2) + "\n" : text;
}

// Runs body, mapping library errors to kExitError with a diagnostic.
template <typename Body>
CommandResult guarded(Body&& body) {
  try {
    return body();
  } catch (const Error& e) {
    return {kExitError, "", std::string("error: ") + e.what() + "\n"};
  }
}

inline void require_unimodular(const IntMatrix& a, const char* name) {
  require_square(a, name);
  const Integer d = det(a);
  if (d != 1 && d != -1) {
    throw NotUnimodular(std::string(name) + ": det = " + d.str() + ", not +-1");
  }
}

}  // namespace detail

inline CommandResult run_invariants(const IntMatrix& a, OutputFormat format) {
  return detail::guarded([&] {
    CommandResult res;
    detail::warn_if_large(a, res);
    const InvariantReport r = make_report(a);
    if (!r.h1) {
      res.err += "warning: det = " + r.det.str() +
                 " is not +-1; bundle invariants (h1, alexander, theorem1_check) absent\n";
      res.exit_code = kExitPartial;
    } else if (!*r.theorem1_check) {
      res.err += "warning: H1 is not Z + K0 for this monodromy (trace " + r.trace.str() +
                 " < 0, sign switched before computing K0)\n";
    }
    res.out = detail::render(report_to_json(r), format, render_text(r));
    return res;
  });
}

inline CommandResult run_compare(const IntMatrix& a, const IntMatrix& b, std::size_t depth,
                                 OutputFormat format) {
  return detail::guarded([&] {
    CommandResult res;
    detail::warn_if_large(a, res);
    detail::require_unimodular(a, "first matrix");
    detail::require_unimodular(b, "second matrix");
    const ComparisonVerdict v = compare_bundles(TorusBundle(a), TorusBundle(b), depth);
    switch (v.outcome) {
      case ComparisonVerdict::Outcome::Homeomorphic:
        res.exit_code = kExitOk;
        break;
      case ComparisonVerdict::Outcome::Distinct:
        res.exit_code = kExitDistinct;
        break;
      case ComparisonVerdict::Outcome::Inconclusive:
        res.exit_code = kExitInconclusive;
        break;
    }
    const json j{{"verdict", to_string(v.outcome)},
                 {"witness", v.witness},
                 {"certificate", v.certificate ? matrix_to_json(*v.certificate) : json(nullptr)}};
    std::string text = "verdict:        " + to_string(v.outcome) + "\n" +
                       "witness:        " + v.witness + "\n";
    if (v.certificate) text += "certificate:    " + to_string(*v.certificate) + "\n";
    res.out = detail::render(j, format, text);
    return res;
  });
}

inline CommandResult run_snf(const IntMatrix& a, OutputFormat format) {
  return detail::guarded([&] {
    CommandResult res;
    detail::warn_if_large(a, res);
    const SmithDecomposition snf = smith_normal_form(a);
    const FgAbelianGroup coker = cokernel(a);
    json diag = json::array();
    for (const auto& d : snf.diagonal()) diag.push_back(integer_to_json(d));
    const json j{{"u", matrix_to_json(snf.u)},
                 {"d", matrix_to_json(snf.d)},
                 {"v", matrix_to_json(snf.v)},
                 {"diagonal", diag},
                 {"cokernel", format_group(coker)}};
    const std::string text = "U:\n" + format_matrix(snf.u) + "D:\n" + format_matrix(snf.d) +
                             "V:\n" + format_matrix(snf.v) + "cokernel: " +
                             format_group(coker) + "\n";
    res.out = detail::render(j, format, text);
    return res;
  });
}

/// Exit 0 with a witness, 1 when an invariant rules shift equivalence out,
/// 2 when the bounded search is simply empty.
inline CommandResult run_se_search(const IntMatrix& a, const IntMatrix& b, unsigned max_lag,
                                   unsigned entry_bound, OutputFormat format) {
  return detail::guarded([&] {
    CommandResult res;
    detail::warn_if_large(a, res);
    const auto obstruction = shift_equivalence_obstruction(a, b);
    const auto witness = search_se_witness(a, b, max_lag, entry_bound);
    std::string verdict = "Unknown";
    res.exit_code = kExitInconclusive;
    if (witness) {
      verdict = "ShiftEquivalent";
      res.exit_code = kExitOk;
    } else if (obstruction) {
      verdict = "NotShiftEquivalent";
      res.exit_code = kExitDistinct;
    }
    json jw = nullptr;
    std::string text = "verdict:        " + verdict + "\n";
    if (witness) {
      jw = json{{"r", matrix_to_json(witness->r)},
                {"s", matrix_to_json(witness->s)},
                {"lag", witness->lag}};
      text += "lag:            " + std::to_string(witness->lag) + "\n" +
              "R:              " + to_string(witness->r) + "\n" +
              "S:              " + to_string(witness->s) + "\n";
    }
    if (obstruction) text += "obstruction:    " + *obstruction + "\n";
    const json j{{"verdict", verdict},
                 {"witness", jw},
                 {"obstruction", obstruction ? json(*obstruction) : json(nullptr)}};
    res.out = detail::render(j, format, text);
    return res;
  });
}

inline CommandResult run_conj_search(const IntMatrix& a, const IntMatrix& b, std::size_t depth,
                                     OutputFormat format) {
  return detail::guarded([&] {
    CommandResult res;
    detail::warn_if_large(a, res);
    const ConjugacyResult c = conjugacy_search(a, b, depth);
    std::string verdict;
    switch (c.status) {
      case ConjugacyResult::Status::Conjugate:
        verdict = "Conjugate";
        res.exit_code = kExitOk;
        break;
      case ConjugacyResult::Status::NotConjugate:
        verdict = "NotConjugate";
        res.exit_code = kExitDistinct;
        break;
      case ConjugacyResult::Status::Unknown:
        verdict = "Unknown";
        res.exit_code = kExitInconclusive;
        break;
    }
    std::string text = "verdict:        " + verdict + "\n";
    if (c.conjugator) text += "conjugator:     " + to_string(*c.conjugator) + "\n";
    if (!c.obstruction.empty()) text += "obstruction:    " + c.obstruction + "\n";
    const json j{{"verdict", verdict},
                 {"conjugator", c.conjugator ? matrix_to_json(*c.conjugator) : json(nullptr)},
                 {"obstruction", c.obstruction.empty() ? json(nullptr) : json(c.obstruction)}};
    res.out = detail::render(j, format, text);
    return res;
  });
}

/// Prints the dilated 0/1 matrix in a format parse_matrix reads back.
inline CommandResult run_dilate(const IntMatrix& a, OutputFormat format) {
  return detail::guarded([&] {
    CommandResult res;
    detail::warn_if_large(a, res);
    const IntMatrix d = edge_dilation(a);
    res.out = detail::render(json{{"rows", matrix_to_json(d)}}, format, format_matrix(d));
    return res;
  });
}

}  // namespace ckf::cli
