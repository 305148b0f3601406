#pragma once

// Command implementations behind the biconic tool. Every artifact is exact
// text: JSON reports with sorted keys that embed the full run configuration,
// and TSV point dumps. Files are written atomically.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "biconic/localpoints.hpp"
#include "biconic/propagate.hpp"
#include "biconic/spec_file.hpp"
#include "biconic/surface.hpp"

namespace biconic {

using Json = nlohmann::json;

constexpr int kFormatVersion = 1;

enum ExitCode { kExitOk = 0, kExitParse = 2, kExitDomain = 3, kExitThreshold = 4 };

struct RunConfig {
  std::string command;
  std::string fixture;
  int depth = 5;
  int branch = 4;
  long height = 20;
  std::vector<Integer> primes;  // empty: the three smallest good primes
  int precision = 1;
  std::uint64_t seed = 1;
  int retries = 20;
  std::string out = ".";
  std::optional<std::array<Integer, 4>> target;  // steer; default is the seed's class
  std::optional<std::array<Rational, 4>> point;  // certify
  std::optional<int> threshold;                  // probe, percent of smooth classes

  PropConfig prop() const {
    PropConfig c;
    c.depth = depth;
    c.branch = branch;
    c.height = height;
    c.seed = seed;
    c.retries = retries;
    return c;
  }

  Json to_json() const {
    Json j;
    j["command"] = command;
    j["fixture"] = fixture;
    j["depth"] = depth;
    j["branch"] = branch;
    j["height"] = height;
    Json ps = Json::array();
    for (const auto& p : primes) ps.push_back(p.get_str());
    j["primes"] = ps;
    j["precision"] = precision;
    j["seed"] = seed;
    j["retries"] = retries;
    j["out"] = out;
    if (target) {
      Json t = Json::array();
      for (const auto& c : *target) t.push_back(c.get_str());
      j["target"] = t;
    } else {
      j["target"] = nullptr;
    }
    if (point) {
      Json t = Json::array();
      for (const auto& c : *point) t.push_back(c.get_str());
      j["point"] = t;
    } else {
      j["point"] = nullptr;
    }
    j["threshold"] = threshold ? Json(*threshold) : Json(nullptr);
    return j;
  }
};

/// Comma-separated values of a command line flag.
inline std::vector<Rational> flag_values(const std::string& flag, const std::string& text, size_t expected = 0) {
  std::vector<Rational> v;
  size_t pos = 0;
  for (;;) {
    size_t comma = text.find(',', pos);
    std::string tok = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    size_t off = 0;
    tok = detail::trim(tok, off);
    auto r = parse_rational(tok);
    if (!r) throw ParseError(0, static_cast<int>(pos + off) + 1, "--" + flag + ": '" + tok + "' is not a number");
    v.push_back(*r);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (expected && v.size() != expected)
    throw ParseError(0, 1, "--" + flag + " expects " + std::to_string(expected) + " values, got " + std::to_string(v.size()));
  return v;
}

inline std::vector<Integer> flag_integers(const std::string& flag, const std::string& text, size_t expected = 0) {
  std::vector<Integer> out;
  for (const auto& r : flag_values(flag, text, expected)) {
    if (r.get_den() != 1) throw ParseError(0, 1, "--" + flag + ": '" + r.get_str() + "' is not an integer");
    out.push_back(r.get_num());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Serialization of domain objects

inline Json form_json(const TernaryQuadraticForm& Q) {
  Json a = Json::array();
  for (const auto& c : Q.c) a.push_back(c.get_str());
  return a;
}

inline std::string factorization_string(const BinaryFactorization& f) {
  std::string out = f.content.get_str();
  for (const auto& [g, e] : f.factors) {
    out += " * (" + g.to_string() + ")";
    if (e > 1) out += "^" + std::to_string(e);
  }
  return out;
}

inline Json fiber_report_json(const SingularFiberReport& r) {
  Json j;
  j["factor"] = r.factor.to_string();
  j["multiplicity"] = r.multiplicity;
  j["field"] = r.field.label();
  j["param"] = "[" + r.param[0].to_string() + ":" + r.param[1].to_string() + "]";
  j["rank"] = r.rank;
  j["classification"] = fiber_class_name(r.classification);
  if (r.rank == 2) {
    j["node"] = "[" + r.node[0].to_string() + ":" + r.node[1].to_string() + ":" + r.node[2].to_string() + "]";
    j["node_lift"] = r.node_lift.to_string();
    j["delta"] = r.delta.to_string();
    j["splitting_field"] = r.splitting_field;
  }
  return j;
}

inline Json certificate_json(const Certificate& c) {
  Json j;
  j["point"] = c.P.to_string();
  j["t1"] = c.t1.to_string();
  j["t2"] = c.t2.to_string();
  j["L1"] = c.L1;
  j["L2"] = c.L2;
  j["verdict"] = c.verdict;
  return j;
}

inline Json report_header(const RunConfig& cfg) {
  Json j;
  j["format_version"] = kFormatVersion;
  j["config"] = cfg.to_json();
  return j;
}

inline Json fixture_json(const SurfaceSpec& spec) {
  Json j;
  j["name"] = spec.name;
  j["q"] = form_json(spec.q);
  j["r1"] = form_json(spec.r1);
  j["r2"] = form_json(spec.r2);
  if (spec.seed) {
    Json s = Json::array();
    for (const auto& c : *spec.seed) s.push_back(c.get_str());
    j["seed"] = s;
  } else {
    j["seed"] = nullptr;
  }
  return j;
}

// ---------------------------------------------------------------------------
// Files

/// Write through a temporary file in the same directory, then rename.
inline void write_atomic(const std::filesystem::path& path, const std::string& data) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) fail(ErrorKind::InvalidArgument, "cannot write '" + tmp.string() + "'");
    f << data;
    if (!f) fail(ErrorKind::InvalidArgument, "write to '" + tmp.string() + "' failed");
  }
  std::filesystem::rename(tmp, path);
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

struct CommandResult {
  int exit_code = kExitOk;
  std::vector<std::string> lines;         // printed to stdout
  std::vector<std::filesystem::path> files;
};

// ---------------------------------------------------------------------------
// analyze

inline Json analyze_report(const SurfaceSpec& spec, const RunConfig& cfg, std::vector<std::string>& summary) {
  BiConicSurface S = spec.surface();
  Json j = report_header(cfg);
  j["fixture"] = fixture_json(spec);

  SmoothnessReport sm = check_smooth(S);
  Json js;
  js["smooth"] = sm.smooth;
  js["reduced"] = sm.reduced;
  Json pts = Json::array();
  for (const auto& p : sm.points) pts.push_back(p.surface_string());
  js["singular_points"] = pts;
  j["smoothness"] = js;
  if (sm.smooth) {
    summary.push_back("surface: smooth");
  } else {
    std::string where;
    for (const auto& p : sm.points) where += (where.empty() ? "" : ", ") + p.surface_string();
    summary.push_back(std::string("surface: singular") + (sm.reduced ? "" : " (non-reduced branch curve)") +
                      (where.empty() ? "" : " at " + where));
  }

  const BinaryForm& d = S.discriminant();
  BinaryFactorization fac = factor_binary(d);
  Json jd;
  jd["sextic"] = d.to_string();
  jd["degree"] = d.degree();
  jd["factorization"] = factorization_string(fac);
  Json jf = Json::array();
  for (const auto& [g, e] : fac.factors) jf.push_back(Json{{"factor", g.to_string()}, {"multiplicity", e}});
  jd["factors"] = jf;
  j["discriminant"] = jd;
  summary.push_back("discriminant: degree " + std::to_string(d.degree()) + ", " + factorization_string(fac));

  HypothesisReport h = check_hypotheses(S);
  Json fibs = Json::array();
  for (int i = 1; i <= 2; ++i) {
    Json fj;
    fj["fibration"] = i;
    Json table = Json::array();
    for (const auto& r : singular_fiber_table(S, i)) table.push_back(fiber_report_json(r));
    fj["singular_fibers"] = table;
    const BadLocus& bl = i == 1 ? h.bad1 : h.bad2;
    Json bad = Json::array();
    for (const auto& p : bl.points) bad.push_back(p.to_string());
    fj["bad_locus"] = bad;
    fj["warnings"] = bl.warnings;
    fibs.push_back(fj);
  }
  j["fibrations"] = fibs;

  Json jh;
  Json samples = Json::array();
  for (const auto& smp : h.samples)
    samples.push_back(Json{{"u1", smp.u1.to_string()}, {"u2", smp.u2.to_string()}, {"count", smp.count}});
  jh["samples"] = samples;
  jh["intersection_number"] = h.intersection_number;
  jh["condition_a"] = h.condition_a;
  jh["condition_b"] = h.condition_b;
  Json viol = Json::array();
  for (const auto& v : h.violating) viol.push_back(Json{{"point", v.point.to_string()}, {"eckardt", v.eckardt}});
  jh["violating"] = viol;
  j["hypotheses"] = jh;
  summary.push_back(std::string("condition (a): ") + (h.condition_a ? "HOLDS" : "FAILS") + " (" +
                    std::to_string(h.intersection_number) + ")");
  if (h.condition_b) {
    summary.push_back("condition (b): HOLDS");
  } else {
    std::string w;
    for (const auto& v : h.violating) w += (w.empty() ? "" : ", ") + v.point.to_string();
    summary.push_back("condition (b): VIOLATED at " + w);
  }

  // Certificate, or the failed condition, for every rational violating point.
  Json certs = Json::array();
  for (const auto& v : h.violating) {
    if (!v.point.is_rational()) continue;
    SurfacePoint P = v.point.rational();
    CertificateResult c = obstruction_certificate(S, P);
    if (c.certificate) {
      certs.push_back(certificate_json(*c.certificate));
      summary.push_back("certificate " + P.to_string() + ": " + c.certificate->verdict + " (L1 = " + c.certificate->L1 +
                        ", L2 = " + c.certificate->L2 + ")");
    } else {
      certs.push_back(Json{{"point", P.to_string()}, {"failed_condition", c.failed_condition}});
      summary.push_back("no certificate " + P.to_string() + ": " + c.failed_condition);
    }
  }
  j["certificates"] = certs;
  j["summary"] = summary;
  return j;
}

inline std::filesystem::path artifact(const RunConfig& cfg, const SurfaceSpec& spec, const std::string& suffix) {
  return std::filesystem::path(cfg.out) / (spec.name + "." + suffix);
}

inline CommandResult cmd_analyze(const RunConfig& cfg) {
  SurfaceSpec spec = load_spec(cfg.fixture);
  CommandResult out;
  Json j = analyze_report(spec, cfg, out.lines);
  auto path = artifact(cfg, spec, "analyze.json");
  write_atomic(path, dump(j));
  out.files.push_back(path);
  return out;
}

// ---------------------------------------------------------------------------
// generate

inline std::string points_tsv(const Generation& g) {
  std::string out = "x\ty\tz\tw\tdepth\theight\n";
  for (const auto& n : g.nodes)
    out += n.point.x.get_str() + "\t" + n.point.y.get_str() + "\t" + n.point.z.get_str() + "\t" + n.point.w.get_str() +
           "\t" + std::to_string(n.depth) + "\t" + n.height().get_str() + "\n";
  return out;
}

inline CommandResult cmd_generate(const RunConfig& cfg) {
  SurfaceSpec spec = load_spec(cfg.fixture);
  BiConicSurface S = spec.surface();
  SurfacePoint P0 = spec.seed_point();
  Generation g = generate_points(S, P0, cfg.prop());
  CommandResult out;
  Json j = report_header(cfg);
  j["fixture"] = fixture_json(spec);
  Json stats = Json::array();
  for (const auto& st : g.stats) {
    stats.push_back(Json{{"depth", st.depth},
                         {"points", st.points},
                         {"dead_ends", st.dead_ends},
                         {"pi1_params", st.pi1_params},
                         {"pi2_params", st.pi2_params}});
    out.lines.push_back("depth " + std::to_string(st.depth) + ": " + std::to_string(st.points) + " new points, " +
                        std::to_string(st.pi1_params) + " pi1 / " + std::to_string(st.pi2_params) +
                        " pi2 parameters, " + std::to_string(st.dead_ends) + " dead ends");
  }
  j["stats"] = stats;
  j["dead_ends"] = g.dead_ends;
  j["total_points"] = g.nodes.size();
  auto tsv = artifact(cfg, spec, "points.tsv"), js = artifact(cfg, spec, "generate.json");
  write_atomic(tsv, points_tsv(g));
  write_atomic(js, dump(j));
  out.files = {tsv, js};
  out.lines.push_back("total: " + std::to_string(g.nodes.size()) + " points");
  return out;
}

// ---------------------------------------------------------------------------
// steer / probe

inline std::vector<Integer> probe_primes(const RunConfig& cfg, const BiConicSurface& S, const SurfacePoint& P0) {
  if (!cfg.primes.empty()) return cfg.primes;
  return good_primes(S, P0, 3);
}

inline CommandResult cmd_steer(const RunConfig& cfg) {
  SurfaceSpec spec = load_spec(cfg.fixture);
  BiConicSurface S = spec.surface();
  SurfacePoint P0 = spec.seed_point();
  Integer p = probe_primes(cfg, S, P0).front();
  ResidueTarget t = cfg.target ? make_target(S, p, cfg.precision, *cfg.target) : reduce_point(S, P0, p, cfg.precision);
  SteerResult r = steer_to_target(S, P0, t, cfg.depth, cfg.prop());
  CommandResult out;
  Json j = report_header(cfg);
  j["fixture"] = fixture_json(spec);
  j["target"] = t.to_string();
  j["success"] = r.success;
  j["attempts"] = r.attempts;
  j["failure"] = r.failure;
  Json path = Json::array();
  for (const auto& n : r.path) {
    Json e{{"depth", n.depth}, {"point", n.point.to_string()}, {"height", n.height().get_str()}};
    e["direction"] = n.direction ? Json(n.direction->to_string()) : Json(nullptr);
    e["fiber"] = n.fiber ? Json(n.fiber->to_string()) : Json(nullptr);
    path.push_back(e);
  }
  j["path"] = path;
  j["transcript"] = r.transcript;
  auto file = artifact(cfg, spec, "steer.json");
  write_atomic(file, dump(j));
  out.files.push_back(file);
  for (const auto& n : r.path) out.lines.push_back("P" + std::to_string(n.depth) + " = " + n.point.to_string());
  for (const auto& l : r.transcript) out.lines.push_back(l);
  out.lines.push_back(std::string("steer: ") + (r.success ? "SUCCESS" : "FAILED (" + r.failure + ")") + " after " +
                      std::to_string(r.attempts) + " attempts");
  if (!r.success) out.exit_code = kExitDomain;
  return out;
}

inline CommandResult cmd_probe(const RunConfig& cfg) {
  SurfaceSpec spec = load_spec(cfg.fixture);
  BiConicSurface S = spec.surface();
  SurfacePoint P0 = spec.seed_point();
  CommandResult out;
  Json j = report_header(cfg);
  j["fixture"] = fixture_json(spec);
  Json probes = Json::array();
  bool below = false;
  for (const auto& p : probe_primes(cfg, S, P0)) {
    CoverageStats c = coverage_probe(S, P0, p, cfg.precision, cfg.depth, cfg.prop());
    Json e;
    e["p"] = p.get_str();
    e["m"] = c.m;
    e["total"] = c.total;
    e["hits"] = c.hits;
    Json missed = Json::array();
    for (const auto& t : c.missed) missed.push_back(t.to_string());
    e["missed"] = missed;
    probes.push_back(e);
    size_t hit = c.hits.empty() ? 0 : c.hits.back();
    std::string per;
    for (size_t d = 0; d < c.hits.size(); ++d) per += (d ? " " : "") + std::to_string(c.hits[d]);
    out.lines.push_back("p = " + p.get_str() + ", m = " + std::to_string(c.m) + ": " + std::to_string(hit) + "/" +
                        std::to_string(c.total) + " smooth classes at depth " + std::to_string(cfg.depth) +
                        " (per depth: " + per + ")");
    if (cfg.threshold && hit * 100 < static_cast<size_t>(*cfg.threshold) * c.total) below = true;
  }
  j["probes"] = probes;
  auto file = artifact(cfg, spec, "probe.json");
  write_atomic(file, dump(j));
  out.files.push_back(file);
  if (below) {
    out.lines.push_back("probe: coverage below " + std::to_string(*cfg.threshold) + "%");
    out.exit_code = kExitThreshold;
  }
  return out;
}

// ---------------------------------------------------------------------------
// certify

inline CommandResult cmd_certify(const RunConfig& cfg) {
  SurfaceSpec spec = load_spec(cfg.fixture);
  BiConicSurface S = spec.surface();
  require(cfg.point.has_value(), ErrorKind::InvalidArgument, "certify needs --point x,y,z,w");
  const auto& c = *cfg.point;
  SurfacePoint P = SurfacePoint::from_rationals(c[0], c[1], c[2], c[3]);
  CertificateResult r = obstruction_certificate(S, P);
  CommandResult out;
  Json j = report_header(cfg);
  j["fixture"] = fixture_json(spec);
  j["point"] = P.to_string();
  if (r.certificate) {
    j["certificate"] = certificate_json(*r.certificate);
    out.lines.push_back(P.to_string() + ": " + r.certificate->verdict);
    out.lines.push_back("pi1 fiber over " + r.certificate->t1.to_string() + ", L1 = " + r.certificate->L1);
    out.lines.push_back("pi2 fiber over " + r.certificate->t2.to_string() + ", L2 = " + r.certificate->L2);
  } else {
    j["certificate"] = nullptr;
    j["failed_condition"] = r.failed_condition;
    out.lines.push_back(P.to_string() + ": no certificate, " + r.failed_condition);
  }
  auto file = artifact(cfg, spec, "certify.json");
  write_atomic(file, dump(j));
  out.files.push_back(file);
  return out;
}

/// Runs a command and maps errors to exit codes; messages go to err.
inline int run_command(const RunConfig& cfg, std::ostream& os, std::ostream& err) {
  try {
    CommandResult r;
    if (cfg.command == "analyze") r = cmd_analyze(cfg);
    else if (cfg.command == "generate") r = cmd_generate(cfg);
    else if (cfg.command == "steer") r = cmd_steer(cfg);
    else if (cfg.command == "probe") r = cmd_probe(cfg);
    else if (cfg.command == "certify") r = cmd_certify(cfg);
    else fail(ErrorKind::InvalidArgument, "unknown command '" + cfg.command + "'");
    for (const auto& l : r.lines) os << l << "\n";
    for (const auto& f : r.files) os << "wrote " << f.string() << "\n";
    return r.exit_code;
  } catch (const ParseError& e) {
    err << cfg.fixture << ": " << e.what() << "\n";
    return kExitParse;
  } catch (const Error& e) {
    err << cfg.fixture << ": " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::filesystem::filesystem_error& e) {
    err << e.what() << "\n";
    return kExitDomain;
  }
}

}  // namespace biconic
