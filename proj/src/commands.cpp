#include "qcdim/commands.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "json.hpp"
#include "qcdim/bounds.hpp"
#include "qcdim/claims.hpp"
#include "qcdim/errors.hpp"
#include "qcdim/fractal.hpp"
#include "qcdim/optimizer.hpp"

namespace qcdim {

using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int kCsvDigits = 30;
constexpr int kTextDigits = 16;
constexpr long kMaxGridCount = 100000;

using Table = std::vector<std::vector<std::string>>;

std::string render_csv(const std::vector<std::string>& header, const Table& rows) {
  std::ostringstream os;
  auto line = [&os](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << "\n";
  };
  line(header);
  for (const auto& r : rows) line(r);
  return os.str();
}

std::string render_text(const std::vector<std::string>& header, const Table& rows) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t i = 0; i < header.size(); ++i) width[i] = header[i].size();
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
  }
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& cells) {
    std::string s;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      s += cells[i];
      if (i + 1 < cells.size()) s += std::string(width[i] - cells[i].size() + 2, ' ');
    }
    os << s << "\n";
  };
  line(header);
  for (const auto& r : rows) line(r);
  return os.str();
}

std::string render_table(OutputFormat f, const std::vector<std::string>& header,
                         const Table& rows) {
  return f == OutputFormat::Text ? render_text(header, rows) : render_csv(header, rows);
}

int cell_digits(OutputFormat f) { return f == OutputFormat::Text ? kTextDigits : kCsvDigits; }

ordered_json number_json(const HPReal& v) { return v.to_double(); }

ordered_json config_json(const RunConfig& cfg) {
  ordered_json c;
  c["precision_digits"] = cfg.precision.digits();
  c["format"] = to_string(cfg.format);
  c["strict"] = cfg.strict;
  c["seed"] = cfg.seed;
  ordered_json tol = ordered_json::object();
  for (const auto& [key, value] : RunConfig::tolerance_defaults()) {
    tol[key] = cfg.tolerance(key);
  }
  c["tolerances"] = std::move(tol);
  return c;
}

std::string envelope(std::string_view command, ordered_json config, ordered_json rows) {
  ordered_json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["command"] = command;
  doc["config"] = std::move(config);
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    std::string item(text.substr(start, comma - start));
    if (!item.empty()) out.push_back(std::move(item));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<BoundMethod> parse_methods(std::string_view text) {
  const std::vector<BoundMethod> all{BoundMethod::Astala,       BoundMethod::Antisymmetric,
                                     BoundMethod::Symmetric,    BoundMethod::ComposedLine,
                                     BoundMethod::Theorem42,    BoundMethod::Theorem43};
  if (text.empty() || text == "all") return all;
  std::vector<BoundMethod> out;
  for (const std::string& name : split_list(text)) {
    const auto m = parse_bound_method(name);
    if (!m) {
      throw UsageError("unknown bound method '" + name +
                       "'; expected astala, antisymmetric, symmetric, composed_line, "
                       "theorem42 or theorem43");
    }
    out.push_back(*m);
  }
  if (out.empty()) throw UsageError("empty method list");
  return out;
}

HPReal parse_value(const std::string& field, std::string_view name, Precision p) {
  try {
    return HPReal::parse(field, p);
  } catch (const DomainError&) {
    throw UsageError(std::string(name) + ": '" + field + "' is not a number");
  }
}

void check_domain(const HPReal& v, std::string_view name, GridDomain domain) {
  const std::string n(name);
  switch (domain) {
    case GridDomain::LineDimension:
      if (!(v > 0) || !(v <= 1)) {
        throw UsageError(n + " = " + v.to_string(17) +
                         " is outside the open domain (0,1) for line dimensions "
                         "(the endpoint 1 is accepted for the clean bounds)");
      }
      return;
    case GridDomain::OpenLineDimension:
      if (!(v > 0) || !(v < 1)) {
        throw UsageError(n + " = " + v.to_string(17) +
                         " is outside the open domain (0,1)");
      }
      return;
    case GridDomain::Distortion:
      if (!(v >= 1) || !v.is_finite()) {
        throw UsageError(n + " = " + v.to_string(17) + " is outside the domain K >= 1");
      }
      return;
  }
}

}  // namespace

// -- Configuration ----------------------------------------------------------

std::string_view to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::Csv: return "csv";
    case OutputFormat::Json: return "json";
    case OutputFormat::Text: return "text";
  }
  return "csv";
}

OutputFormat parse_output_format(std::string_view name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  if (name == "text") return OutputFormat::Text;
  throw UsageError("unknown format '" + std::string(name) + "'; expected csv, json or text");
}

const std::map<std::string, double>& RunConfig::tolerance_defaults() {
  static const std::map<std::string, double> defaults{
      {"dominance_slack", 0.0},
      {"sandwich_slack", kSandwichSlack},
  };
  return defaults;
}

void RunConfig::set_tolerance(const std::string& key, double value) {
  if (!tolerance_defaults().contains(key)) {
    std::string known;
    for (const auto& [k, v] : tolerance_defaults()) known += (known.empty() ? "" : ", ") + k;
    throw UsageError("unknown tolerance key '" + key + "'; known keys: " + known);
  }
  if (!(value >= 0)) throw UsageError("tolerance '" + key + "' must be non-negative");
  tolerance_overrides[key] = value;
}

double RunConfig::tolerance(const std::string& key) const {
  if (auto it = tolerance_overrides.find(key); it != tolerance_overrides.end()) {
    return it->second;
  }
  return tolerance_defaults().at(key);
}

std::optional<int> precision_from_environment() {
  const char* raw = std::getenv("QCDIM_PRECISION");
  if (!raw || !*raw) return std::nullopt;
  char* end = nullptr;
  const long v = std::strtol(raw, &end, 10);
  if (*end != '\0' || v <= 0 || v > Precision::kMaximumDigits) {
    throw UsageError(std::string("QCDIM_PRECISION must be a positive digit count, got '") +
                     raw + "'");
  }
  return static_cast<int>(v);
}

Precision resolve_precision(int digits, std::vector<std::string>& warnings) {
  if (digits < Precision::kForcedMinimumDigits || digits > Precision::kMaximumDigits) {
    throw UsageError("precision must lie between " +
                     std::to_string(Precision::kForcedMinimumDigits) + " and " +
                     std::to_string(Precision::kMaximumDigits) + " digits");
  }
  if (digits < Precision::kMinimumDigits) {
    warnings.push_back("precision " + std::to_string(digits) +
                       " is below the 30-digit floor; results are for demonstration only "
                       "and precision-sensitive claims are expected to fail");
    return Precision::forced(digits);
  }
  return Precision(digits);
}

std::vector<HPReal> parse_grid(std::string_view text, std::string_view name,
                               GridDomain domain, Precision p) {
  std::vector<std::string> f;
  std::size_t start = 0;
  while (true) {
    const std::size_t colon = text.find(':', start);
    f.emplace_back(text.substr(start, colon - start));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }

  std::vector<HPReal> values;
  if (f.size() == 1) {
    values.push_back(parse_value(f[0], name, p));
  } else if (f.size() == 3) {
    const HPReal lo = parse_value(f[0], name, p);
    const HPReal hi = parse_value(f[1], name, p);
    char* end = nullptr;
    const long count = std::strtol(f[2].c_str(), &end, 10);
    if (f[2].empty() || *end != '\0' || count < 1 || count > kMaxGridCount) {
      throw UsageError(std::string(name) + ": grid count must be an integer in [1, " +
                       std::to_string(kMaxGridCount) + "], got '" + f[2] + "'");
    }
    for (long i = 0; i < count; ++i) {
      values.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
    }
  } else {
    throw UsageError(std::string(name) + ": expected a value or start:stop:count, got '" +
                     std::string(text) + "'");
  }
  for (const HPReal& v : values) check_domain(v, name, domain);
  return values;
}

int CommandOutput::exit_code(bool strict) const {
  return failures > 0 || (strict && flagged > 0) ? 1 : 0;
}

// -- bounds -----------------------------------------------------------------

CommandOutput cmd_bounds(const BoundsArgs& args, const RunConfig& cfg) {
  const Precision p = cfg.precision;
  if (args.L.empty() || args.K.empty()) throw UsageError("bounds needs --L and --K");
  const auto Ls = parse_grid(args.L, "L", GridDomain::LineDimension, p);
  const auto Ks = parse_grid(args.K, "K", GridDomain::Distortion, p);
  const auto methods = parse_methods(args.methods);

  CommandOutput out;
  const int digits = cell_digits(cfg.format);
  Table table;
  ordered_json rows = ordered_json::array();
  for (const HPReal& L : Ls) {
    for (const HPReal& K : Ks) {
      const Distortion d = Distortion::from_K(K);
      for (BoundMethod m : methods) {
        ordered_json row;
        row["L"] = number_json(L);
        row["L_decimal"] = L.to_string();
        row["K"] = number_json(K);
        row["K_decimal"] = K.to_string();
        row["method"] = to_string(m);
        try {
          const BoundSet b = evaluate_bounds(m, DimensionValue(L), d);
          table.push_back({L.to_string(digits), K.to_string(digits), std::string(to_string(m)),
                           b.lower.to_string(digits), b.upper.to_string(digits),
                           b.hypotheses_met ? "true" : "false", "ok"});
          row["lower"] = number_json(b.lower);
          row["lower_decimal"] = b.lower.to_string();
          row["upper"] = number_json(b.upper);
          row["upper_decimal"] = b.upper.to_string();
          row["hypotheses_met"] = b.hypotheses_met;
          row["status"] = "ok";
          row["message"] = b.notes;
        } catch (const DomainError& e) {
          ++out.flagged;
          table.push_back({L.to_string(digits), K.to_string(digits), std::string(to_string(m)),
                           "", "", "false", "domain_error"});
          row["lower"] = nullptr;
          row["lower_decimal"] = nullptr;
          row["upper"] = nullptr;
          row["upper_decimal"] = nullptr;
          row["hypotheses_met"] = false;
          row["status"] = "domain_error";
          row["message"] = e.what();
        }
        rows.push_back(std::move(row));
      }
    }
  }
  out.rows = static_cast<int>(table.size());
  if (out.flagged > 0) {
    out.warnings.push_back(std::to_string(out.flagged) +
                           " cell(s) outside a method's domain were flagged");
  }

  if (cfg.format == OutputFormat::Json) {
    ordered_json c = config_json(cfg);
    c["L"] = args.L;
    c["K"] = args.K;
    c["methods"] = args.methods.empty() ? "all" : args.methods;
    out.text = envelope("bounds", std::move(c), std::move(rows));
  } else {
    out.text = render_table(cfg.format,
                            {"L", "K", "method", "lower", "upper", "hypotheses_met", "status"},
                            table);
  }
  return out;
}

// -- verify -----------------------------------------------------------------

CommandOutput cmd_verify(const VerifyArgs& args, const RunConfig& cfg) {
  validate_claim_filter(args.filter);
  VerifyOptions options;
  options.precision = cfg.precision;
  options.filter = args.filter;
  options.seed = cfg.seed;
  options.scan_points = args.scan_points;
  options.timestamp_utc = report_timestamp();
  options.artifact_version = kArtifactVersion;

  CommandOutput out;
  const auto ids = claim_ids();
  const bool any = args.filter.empty() ||
                   std::any_of(ids.begin(), ids.end(), [&](const std::string& id) {
                     return glob_match(args.filter, id);
                   });
  if (!any) out.warnings.push_back("filter '" + args.filter + "' matches no claim");

  const std::string report = cfg.output_path.value_or(args.report_path);
  const VerifySummary summary = verify_all(report, options);
  out.rows = summary.total;
  out.failures = summary.failed;

  switch (cfg.format) {
    case OutputFormat::Text:
      out.text = claims_text_table(summary);
      break;
    case OutputFormat::Json: {
      ordered_json c = config_json(cfg);
      c["filter"] = args.filter;
      c["scan_points"] = args.scan_points;
      out.text = envelope("verify", std::move(c), ordered_json::parse(claims_json_rows(summary)));
      break;
    }
    case OutputFormat::Csv: {
      Table table;
      for (const ClaimResult& r : summary.results) {
        table.push_back({r.claim_id, r.passed ? "true" : "false",
                         r.computed.lo.to_string(kCsvDigits), r.computed.hi.to_string(kCsvDigits),
                         r.expected.lo.to_string(kCsvDigits), r.expected.hi.to_string(kCsvDigits),
                         r.tolerance.to_string(kCsvDigits)});
      }
      out.text = render_csv({"claim_id", "passed", "computed_lo", "computed_hi", "expected_lo",
                             "expected_hi", "tolerance"},
                            table);
      break;
    }
  }
  return out;
}

// -- optimize ---------------------------------------------------------------

CommandOutput cmd_optimize(const OptimizeArgs& args, const RunConfig& cfg) {
  const Precision p = cfg.precision;
  if (args.L.empty() || args.K.empty()) throw UsageError("optimize needs --L and --K");
  const auto Ls = parse_grid(args.L, "L", GridDomain::OpenLineDimension, p);
  const auto Ks = parse_grid(args.K, "K", GridDomain::Distortion, p);
  const auto direction = parse_direction(args.direction);
  if (!direction) {
    throw UsageError("direction must be lower or upper, got '" + args.direction + "'");
  }

  const auto rows = improvement_table(Ls, Ks, *direction);
  const HPReal slack(cfg.tolerance("dominance_slack"), p);

  CommandOutput out;
  out.rows = static_cast<int>(rows.size());
  for (const ImprovementRow& r : rows) {
    if (!r.result) {
      ++out.flagged;
    } else if (r.result->improvement_over_theorem < -slack) {
      ++out.failures;
    }
  }
  if (out.failures > 0) {
    out.warnings.push_back(std::to_string(out.failures) +
                           " cell(s) where the optimum is worse than the theorem schedule");
  }

  if (cfg.format == OutputFormat::Csv) {
    out.text = improvement_csv(rows);
  } else if (cfg.format == OutputFormat::Text) {
    Table table;
    for (const ImprovementRow& r : rows) {
      std::vector<std::string> cells{r.L.to_string(kTextDigits), r.K.to_string(kTextDigits),
                                     std::string(to_string(r.direction))};
      if (r.result) {
        cells.insert(cells.end(), {r.astala_bound->to_string(kTextDigits),
                                   r.result->theorem_bound.to_string(kTextDigits),
                                   r.result->bound_star.to_string(kTextDigits),
                                   r.result->k2_star.to_string(kTextDigits),
                                   r.result->hypotheses_met ? "true" : "false"});
      } else {
        cells.insert(cells.end(), {"", "", "", "", "false"});
      }
      table.push_back(std::move(cells));
    }
    out.text = render_text({"L", "K", "direction", "astala_bound", "theorem_bound",
                            "optimized_bound", "k2_star", "hypotheses_met"},
                           table);
  } else {
    ordered_json jrows = ordered_json::array();
    for (const ImprovementRow& r : rows) {
      ordered_json row;
      row["L"] = number_json(r.L);
      row["L_decimal"] = r.L.to_string();
      row["K"] = number_json(r.K);
      row["K_decimal"] = r.K.to_string();
      row["direction"] = to_string(r.direction);
      if (r.result) {
        const OptimizationResult& o = *r.result;
        row["astala_bound"] = number_json(*r.astala_bound);
        row["astala_bound_decimal"] = r.astala_bound->to_string();
        row["theorem_bound"] = number_json(o.theorem_bound);
        row["theorem_bound_decimal"] = o.theorem_bound.to_string();
        row["optimized_bound"] = number_json(o.bound_star);
        row["optimized_bound_decimal"] = o.bound_star.to_string();
        row["k2_star"] = number_json(o.k2_star);
        row["k2_star_decimal"] = o.k2_star.to_string();
        row["theorem_k2_decimal"] = o.theorem_k2.to_string();
        row["improvement_decimal"] = o.improvement_over_theorem.to_string();
        row["hypotheses_met"] = o.hypotheses_met;
        row["evaluations"] = o.evaluations;
        row["status"] = "ok";
      } else {
        row["hypotheses_met"] = false;
        row["status"] = "domain_error";
        row["message"] = r.error;
      }
      jrows.push_back(std::move(row));
    }
    ordered_json c = config_json(cfg);
    c["L"] = args.L;
    c["K"] = args.K;
    c["direction"] = args.direction;
    out.text = envelope("optimize", std::move(c), std::move(jrows));
  }
  return out;
}

// -- dim --------------------------------------------------------------------

CommandOutput cmd_dim(const DimArgs& args, const RunConfig& cfg) {
  if (args.cantor.empty()) throw UsageError("dim needs --cantor m:q:n");
  CantorSpec spec;
  ModelMap map;
  IntervalCover image;
  try {
    spec = CantorSpec::parse(args.cantor);
    map = ModelMap::parse(args.map);
    image = apply_map(map, generate_cantor(spec));
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  } catch (const ResourceError& e) {
    throw UsageError(e.what());
  }
  if (args.num_scales < 4) throw UsageError("--scales must be at least 4");

  CommandOutput out;
  const int digits = cell_digits(cfg.format);
  auto num = [digits](double v) { return HPReal(v, Precision(30)).to_string(digits); };

  if (args.sandwich.empty()) {
    const DimEstimate est = box_dimension(image, args.num_scales);
    const HPReal L = spec.analytic_dimension(cfg.precision);
    out.rows = 1;
    if (cfg.format == OutputFormat::Json) {
      ordered_json row;
      row["spec"] = spec.label();
      row["map"] = map.label();
      row["K"] = map.distortion_K();
      row["L_analytic"] = number_json(L);
      row["L_analytic_decimal"] = L.to_string();
      row["estimate"] = est.value;
      row["r2"] = est.r2;
      row["scales_used"] = est.scales_used;
      row["delta_min"] = est.scale_range.first;
      row["delta_max"] = est.scale_range.second;
      ordered_json c = config_json(cfg);
      c["cantor"] = args.cantor;
      c["map"] = args.map;
      c["num_scales"] = args.num_scales;
      out.text = envelope("dim", std::move(c), ordered_json::array({row}));
    } else {
      out.text = render_table(
          cfg.format,
          {"spec", "map", "K", "L_analytic", "estimate", "r2", "scales_used", "delta_min",
           "delta_max"},
          {{spec.label(), map.label(), num(map.distortion_K()), L.to_string(digits),
            num(est.value), num(est.r2), std::to_string(est.scales_used),
            num(est.scale_range.first), num(est.scale_range.second)}});
    }
    return out;
  }

  const auto methods = parse_methods(args.sandwich);
  const double slack = cfg.tolerance("sandwich_slack");
  const auto rows = sandwich_check(spec, map, methods, slack, cfg.precision, args.num_scales);
  out.rows = static_cast<int>(rows.size());
  for (const SandwichRow& r : rows) {
    if (!r.error.empty()) {
      ++out.flagged;
    } else if (!r.inside) {
      ++out.failures;
    }
  }
  if (out.failures > 0) {
    out.warnings.push_back(std::to_string(out.failures) +
                           " sandwich violation(s): estimate outside [lower - slack, upper + slack]");
  }

  if (cfg.format == OutputFormat::Csv) {
    out.text = sandwich_csv(rows);
  } else if (cfg.format == OutputFormat::Text) {
    Table table;
    for (const SandwichRow& r : rows) {
      const bool ok = r.error.empty();
      table.push_back({r.spec, r.map, num(r.K), r.L_analytic.to_string(digits),
                       num(r.estimate.value), num(r.estimate.r2), std::string(to_string(r.method)),
                       ok ? r.lower.to_string(digits) : "", ok ? r.upper.to_string(digits) : "",
                       ok ? (r.inside ? "true" : "false") : ""});
    }
    out.text = render_text({"spec", "map", "K", "L_analytic", "estimate", "r2", "method",
                            "lower", "upper", "inside"},
                           table);
  } else {
    ordered_json jrows = ordered_json::array();
    for (const SandwichRow& r : rows) {
      ordered_json row;
      row["spec"] = r.spec;
      row["map"] = r.map;
      row["K"] = r.K;
      row["L_analytic"] = number_json(r.L_analytic);
      row["L_analytic_decimal"] = r.L_analytic.to_string();
      row["estimate"] = r.estimate.value;
      row["r2"] = r.estimate.r2;
      row["method"] = to_string(r.method);
      if (r.error.empty()) {
        row["lower"] = number_json(r.lower);
        row["lower_decimal"] = r.lower.to_string();
        row["upper"] = number_json(r.upper);
        row["upper_decimal"] = r.upper.to_string();
        row["inside"] = r.inside;
        row["status"] = "ok";
      } else {
        row["status"] = "domain_error";
        row["message"] = r.error;
      }
      jrows.push_back(std::move(row));
    }
    ordered_json c = config_json(cfg);
    c["cantor"] = args.cantor;
    c["map"] = args.map;
    c["sandwich"] = args.sandwich;
    c["num_scales"] = args.num_scales;
    out.text = envelope("dim", std::move(c), std::move(jrows));
  }
  return out;
}

}  // namespace qcdim
