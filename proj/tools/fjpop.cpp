// fjpop command line front end.

#include "fjpop/fjpop.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace fjpop;

namespace {

enum class Level { error = 0, warn, info, debug, trace };

Level log_level() {
  const char* env = std::getenv("FJPOP_LOG");
  if (!env) return Level::warn;
  const std::string s(env);
  if (s == "error") return Level::error;
  if (s == "info") return Level::info;
  if (s == "debug") return Level::debug;
  if (s == "trace") return Level::trace;
  return Level::warn;
}

std::mutex log_mutex;

void log(Level lv, const std::string& msg) {
  static const Level threshold = log_level();
  if (lv > threshold) return;
  static const char* names[] = {"error", "warn", "info", "debug", "trace"};
  std::lock_guard lock(log_mutex);
  std::cerr << "[" << names[static_cast<int>(lv)] << "] " << msg << '\n';
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
}

std::vector<double> parse_point(const std::string& text) {
  std::vector<double> x;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) x.push_back(to_double(parse_rational(item)));
  return x;
}

struct RunFlags {
  std::string variant;
  bool products = false;
  bool denominator = false;
  int kmin = 0, kmax = 0;
  double tol = 0.0;
  std::string export_dir;
  unsigned jobs = 1;
  bool csv = false;
};

// Command-line values override the problem file's options.
struct Settings {
  std::optional<Augmentation> variant;
  bool products;
  int kmin, kmax;
  HierarchyOptions hopts;
};

Settings settle(const ProblemFile& pf, const RunFlags& f) {
  Settings s;
  s.variant = f.variant.empty() ? pf.options.variant : parse_variant(f.variant);
  s.products = f.products || pf.options.use_products;
  if (pf.options.sdp_tol) s.hopts.sdp.tol = *pf.options.sdp_tol;
  if (pf.options.stagnation_tol) s.hopts.stagnation_tol = *pf.options.stagnation_tol;
  if (f.tol > 0) s.hopts.sdp.tol = f.tol;
  s.hopts.jobs = f.jobs;
  const PopProblem aug = hierarchy_problem(pf.pop, s.variant, s.products, f.denominator, s.hopts.product_cap);
  const int adm = minimal_order(aug);
  s.kmin = f.kmin > 0 ? f.kmin : pf.options.k_min.value_or(adm);
  s.kmax = f.kmax > 0 ? f.kmax : pf.options.k_max.value_or(s.kmin + 2);
  if (Level::trace <= log_level())
    s.hopts.sdp.trace = [](const std::string& line) { log(Level::trace, line); };
  return s;
}

std::string export_name(const std::string& problem_path, int k) {
  return fs::path(problem_path).stem().string() + "_k" + std::to_string(k) + ".dat-s";
}

std::string moment_sdpa(const PopProblem& aug, int k, bool denominator) {
  return export_sdpa(denominator ? build_denominator_sdp(aug, k).moment : build_moment_sdp(aug, k));
}

int cmd_bounds(const std::string& variant, long long n, long long m, long long d) {
  const BoundReport rep = bound_report(parse_bound_variant(variant), n, m, d);
  std::cout << "variant: " << to_string(rep.variant) << '\n';
  std::cout << "n = " << n << ", m = " << m << ", d = " << d << '\n';
  if (auto w = rep.w.exact_value()) {
    std::cout << "w = " << w->str() << '\n';
  } else {
    std::cout << "w = " << rep.w.to_string() << '\n';
    std::cout << "c part = " << rep.c_part().str() << '\n';
    if (auto b = rep.b_part()) {
      if (auto e = b->log2log2())
        std::cout << "b part = 2^2^" << e->str() << '\n';
      else
        std::cout << "b part = " << b->to_string() << '\n';
    }
  }
  std::cout << "r = " << rep.r.to_string() << '\n';
  return 0;
}

int cmd_build(const std::string& file, int k, const RunFlags& flags, const std::string& out) {
  const ProblemFile pf = load_problem(file);
  Settings s = settle(pf, flags);
  const PopProblem aug = hierarchy_problem(pf.pop, s.variant, s.products, flags.denominator);
  const std::string text = moment_sdpa(aug, k > 0 ? k : s.kmin, flags.denominator);
  if (!out.empty())
    write_file(out, text);
  else if (!flags.export_dir.empty())
    write_file(fs::path(flags.export_dir) / export_name(file, k > 0 ? k : s.kmin), text);
  else
    std::cout << text;
  return 0;
}

int cmd_run(const std::string& file, const RunFlags& flags) {
  const ProblemFile pf = load_problem(file);
  Settings s = settle(pf, flags);
  log(Level::info, "variant " + variant_name(s.variant) + ", k = " + std::to_string(s.kmin) + ".." +
                       std::to_string(s.kmax) + (s.products ? ", products" : "") +
                       (flags.denominator ? ", denominator" : ""));
  if (!flags.export_dir.empty()) {
    const PopProblem aug = hierarchy_problem(pf.pop, s.variant, s.products, flags.denominator);
    for (int k = s.kmin; k <= s.kmax; ++k)
      write_file(fs::path(flags.export_dir) / export_name(file, k), moment_sdpa(aug, k, flags.denominator));
  }
  const HierarchyResult res =
      run_hierarchy(pf.pop, s.variant, s.products, s.kmin, s.kmax, flags.denominator, s.hopts);

  auto status_of = [](const HierarchyRow& r) -> std::string {
    if (r.error) return "error";
    if (r.optimal()) return "optimal";
    if (r.sos_status == SdpStatus::infeasible_suspect || r.moment_status == SdpStatus::infeasible_suspect)
      return "infeasible_suspect";
    return "max_iter";
  };
  for (const auto& r : res.rows) {
    std::ostringstream line;
    line << "k=" << r.k << " rho=" << r.rho << " tau=" << r.tau << " " << status_of(r) << " " << std::fixed
         << std::setprecision(1) << r.wall_ms << " ms";
    log(r.error ? Level::warn : Level::info, line.str() + (r.error ? " (" + *r.error + ")" : ""));
  }

  if (flags.csv) {
    std::cout << "k,rho_k,tau_k,status,wall_ms\n";
    std::cout << std::setprecision(12);
    for (const auto& r : res.rows)
      std::cout << r.k << ',' << r.rho << ',' << r.tau << ',' << status_of(r) << ',' << r.wall_ms << '\n';
  } else {
    json out;
    out["problem"] = file;
    out["variant"] = variant_name(s.variant);
    out["use_products"] = s.products;
    out["denominator"] = flags.denominator;
    out["rows"] = json::array();
    for (const auto& r : res.rows) {
      json row{{"k", r.k},
               {"rho_k", number_or_null(r.rho)},
               {"tau_k", number_or_null(r.tau)},
               {"status", status_of(r)},
               {"sos_status", to_string(r.sos_status)},
               {"moment_status", to_string(r.moment_status)},
               {"wall_ms", r.wall_ms}};
      if (flags.denominator) row["eta"] = r.eta;
      if (r.error) row["error"] = *r.error;
      out["rows"].push_back(std::move(row));
    }
    json summary;
    summary["final_rho"] = res.rows.empty() ? json(nullptr) : number_or_null(res.rows.back().rho);
    summary["stagnation_order"] = res.stagnation_order ? json(*res.stagnation_order) : json(nullptr);
    summary["monotone"] = res.monotone;
    summary["all_optimal"] = res.all_optimal();
    out["summary"] = summary;
    std::cout << out.dump(2) << '\n';
  }
  return res.all_optimal() ? 0 : 1;
}

int cmd_certify(const std::string& problem, const std::string& cert_file, int k, double tol, const RunFlags& flags,
                const std::string& write) {
  const ProblemFile pf = load_problem(problem);
  Certificate cert;
  if (!cert_file.empty()) {
    cert = certificate_from_json(nlohmann::json::parse(read_file(cert_file)), pf.pop.var_names, pf.pop.f);
  } else {
    Settings s = settle(pf, flags);
    const PopProblem aug = hierarchy_problem(pf.pop, s.variant, s.products, flags.denominator);
    const int order = k > 0 ? k : s.kmin;
    const SosProgram sos = flags.denominator ? build_denominator_sdp(aug, order).sos : build_sos_sdp(aug, order);
    const SdpSolution sol = solve_sdp(sos, s.hopts.sdp);
    log(Level::info, "order " + std::to_string(order) + ": " + to_string(sol.status));
    cert = extract_certificate(sos, sol);
  }
  if (!write.empty()) write_file(write, certificate_to_json(cert).dump(2) + "\n");
  const CertificateReport rep = verify_certificate(cert, tol);
  json out = report_to_json(rep, cert.var_names);
  out["xi"] = to_double(cert.xi);
  std::cout << out.dump(2) << '\n';
  return rep.pass ? 0 : 1;
}

int cmd_classify(const std::string& file, const std::string& point, double tol) {
  const ProblemFile pf = load_problem(file);
  const auto x = parse_point(point);
  if (tol <= 0) tol = pf.options.classify_tol.value_or(kDefaultClassifyTol);
  const PointClassification c = classify_point(pf.pop, x, tol);
  json out{{"fj", c.fj_holds}, {"kkt", c.kkt_holds}, {"in_W", c.in_W}};
  if (c.fj_multipliers) out["fj_multipliers"] = *c.fj_multipliers;
  if (c.kkt_multipliers) out["kkt_multipliers"] = *c.kkt_multipliers;
  out["fj_residual"] = c.fj_residual;
  out["kkt_residual"] = c.kkt_residual;
  std::cout << out.dump(2) << '\n';
  return 0;
}

int cmd_echo(const std::string& file) {
  std::cout << problem_to_json(load_problem(file)).dump(2) << '\n';
  return 0;
}

void add_run_flags(CLI::App* sub, RunFlags& f) {
  sub->add_option("--variant", f.variant, "optimality system")
      ->check(CLI::IsMember({"none", "fj", "fj+", "kkt", "kkt+"}));
  sub->add_flag("--products", f.products, "use the products of the inequalities");
  sub->add_flag("--denominator", f.denominator, "denominator variant (theta = lambda0 unless the file sets one)");
  sub->add_option("--kmin", f.kmin, "first relaxation order");
  sub->add_option("--kmax", f.kmax, "last relaxation order");
  sub->add_option("--tol", f.tol, "solver tolerance");
  sub->add_option("--export-sdpa", f.export_dir, "write the moment relaxations as .dat-s files into DIR");
  sub->add_option("--jobs", f.jobs, "orders solved in parallel")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fritz John / KKT augmented moment-SOS relaxations"};
  app.require_subcommand(1);

  std::string variant = "fj";
  long long n = 1, m = 1, d = 1;
  auto* bounds = app.add_subcommand("bounds", "degree bound report");
  bounds->add_option("--variant", variant, "fj, fj-sos, fj+, fj+-sos, fj-deno, kkt, kkt+");
  bounds->add_option("-n", n, "number of variables");
  bounds->add_option("-m", m, "number of inequalities");
  bounds->add_option("-d", d, "degree");

  RunFlags flags;
  std::string file, out, cert, point, write;
  int k = 0;
  double tol = 1e-6;

  auto* build = app.add_subcommand("build", "export one moment relaxation in SDPA format");
  build->add_option("file", file, "problem file")->required();
  build->add_option("-k,--order", k, "relaxation order");
  build->add_option("-o,--out", out, "output file");
  add_run_flags(build, flags);

  auto* run = app.add_subcommand("run", "solve the hierarchy for k in [kmin, kmax]");
  run->add_option("file", file, "problem file")->required();
  add_run_flags(run, flags);
  run->add_flag("--csv", flags.csv, "CSV rows instead of JSON");

  auto* certify = app.add_subcommand("certify", "verify a certificate, or extract one from an SOS solve");
  certify->add_option("problem", file, "problem file")->required();
  certify->add_option("--cert", cert, "certificate JSON to verify");
  certify->add_option("-k,--order", k, "order of the SOS solve when no certificate is given");
  certify->add_option("--write", write, "save the certificate as JSON");
  certify->add_option("--check-tol", tol, "verification tolerance");
  add_run_flags(certify, flags);

  double ctol = 0.0;
  auto* classify = app.add_subcommand("classify", "FJ / KKT status of a point");
  classify->add_option("file", file, "problem file")->required();
  classify->add_option("--point", point, "comma separated coordinates")->required();
  classify->add_option("--tol", ctol, "classification tolerance");

  auto* echo = app.add_subcommand("echo", "re-emit a problem file in canonical form");
  echo->add_option("file", file, "problem file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*bounds) return cmd_bounds(variant, n, m, d);
    if (*build) return cmd_build(file, k, flags, out);
    if (*run) return cmd_run(file, flags);
    if (*certify) return cmd_certify(file, cert, k, tol, flags, write);
    if (*classify) return cmd_classify(file, point, ctol);
    if (*echo) return cmd_echo(file);
  } catch (const std::exception& e) {
    log(Level::error, e.what());
    return 2;
  }
  return 2;
}
