// shiftlab: command-line front end. JSON in, CSV (or JSON certificates) out.
// Exit status: 0 ok, 2 usage or validation error, 3 guard or search limit.

#include "shiftlab/error.hpp"
#include "shiftlab/harness.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace shiftlab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitLimit = 3;

json read_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::InvalidInput, "cannot read " + path);
  try {
    return json::parse(f);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidInput, path + ": " + e.what());
  }
}

// measure and combination arguments: inline JSON or a file
json json_arg(const std::string& arg) {
  if (!arg.empty() && (arg.front() == '[' || arg.front() == '{')) return json::parse(arg);
  return read_json_file(arg);
}

// --system accepts a file, inline JSON or a bare kind name ("dyck")
json system_doc(const std::string& arg) {
  if (!arg.empty() && arg.front() == '{') return json::parse(arg);
  if (std::filesystem::exists(arg)) return read_json_file(arg);
  return json{{"kind", arg}};
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw Error(ErrorCode::InvalidInput, "cannot write " + out);
  f << text;
}

Source source_of(const std::string& text, Codec codec) {
  if (is_point_text(text)) return parse_point(text, codec);
  return parse_word(text, codec);
}

struct Config {
  std::string path;
  void apply(ExperimentConfig& into, CLI::App& sub) const {
    if (path.empty()) return;
    auto c = ExperimentConfig::from_json(read_json_file(path));
    // flags given on the command line win over the file
    if (sub.count("--seed") == 0) into.seed = c.seed;
    if (sub.get_option_no_throw("--trials") && sub.count("--trials") == 0) into.trials = c.trials;
    if (sub.get_option_no_throw("--nmax") && sub.count("--nmax") == 0) into.n_max = c.n_max;
    if (sub.get_option_no_throw("--max-period") && sub.count("--max-period") == 0) into.max_period = c.max_period;
    if (sub.get_option_no_throw("--horizon") && sub.count("--horizon") == 0) into.horizon = c.horizon;
    if (sub.count("--out") == 0) into.out = c.out;
    if (into.system.is_null()) into.system = c.system;
  }
};

int run(int argc, char** argv) {
  CLI::App app{"shiftlab: symbolic dynamics workbench"};
  app.require_subcommand(1);

  // lang-check
  std::string system_arg, word;
  auto* lang = app.add_subcommand("lang-check", "membership of a word (or w^inf) in a system's language");
  lang->add_option("--system", system_arg, "system description (file, inline JSON or kind)")->required();
  lang->add_option("--word", word, "word, or a point written pre(period)^inf")->required();

  // expand-beta
  std::string beta_text;
  std::size_t digits = 16;
  unsigned precision = 0;
  auto* expand = app.add_subcommand("expand-beta", "greedy digits of 1 in base beta");
  expand->add_option("--beta", beta_text, "p/q, decimal, or golden")->required();
  expand->add_option("--digits", digits)->check(CLI::Range(1, 100000));
  expand->add_option("--precision", precision, "treat a decimal beta as known to +-10^-precision");

  // dbar
  std::string mu_path, nu_path;
  std::size_t truncate = 0;
  bool detail = false;
  auto* dist = app.add_subcommand("dbar", "distance between two finitely supported measures");
  dist->add_option("--mu", mu_path, "[{point, mass}, ...], inline or a file")->required();
  dist->add_option("--nu", nu_path, "same shape as --mu")->required();
  dist->add_option("--truncate", truncate, "compare first-m-symbol images (prints lo,hi)");
  dist->add_flag("--detail", detail, "print both one-sided values as JSON");

  // close
  std::string x_text, eps_text, out;
  std::size_t N = 1, max_length = std::size_t{1} << 16;
  bool no_reuse = false;
  auto* close = app.add_subcommand("close", "closing certificate for an orbit segment");
  close->add_option("--system", system_arg)->required();
  close->add_option("--x", x_text, "point or finite prefix")->required();
  close->add_option("--eps", eps_text)->required();
  close->add_option("--N", N)->required();
  close->add_flag("--no-reuse", no_reuse, "do not let a periodic x close itself");
  close->add_option("--max-length", max_length);
  close->add_option("--out", out);

  // link
  std::string y1_text, y2_text, lambda_text;
  std::size_t divisor = 1, a_max = 0;
  auto* lnk = app.add_subcommand("link", "link two root loops with weight lambda");
  lnk->add_option("--system", system_arg)->required();
  lnk->add_option("--y1", y1_text)->required();
  lnk->add_option("--y2", y2_text)->required();
  lnk->add_option("--lambda", lambda_text)->required();
  lnk->add_option("--eps", eps_text)->required();
  lnk->add_option("--divisor", divisor);
  lnk->add_option("--a-max", a_max);
  lnk->add_option("--out", out);

  // approx
  std::string combo_path;
  auto* approx = app.add_subcommand("approx", "one periodic orbit near a convex combination");
  approx->add_option("--system", system_arg)->required();
  approx->add_option("--combo", combo_path, "[{weight, point}, ...]")->required();
  approx->add_option("--eps", eps_text)->required();
  approx->add_option("--out", out);

  // experiments
  ExperimentConfig cfg;
  Config config;
  bool oscillate = false;
  std::size_t depth = kDefaultTruncation;
  std::string target_path;
  auto* generic = app.add_subcommand("generic", "finite prefix of a generic point, checkpoint report");
  generic->add_option("--target", target_path, "{system, targets: [[...], ...]} or {system, combo: [...]}")->required();
  generic->add_option("--system", system_arg, "overrides the system inside the target file");
  generic->add_option("--horizon", cfg.horizon);
  generic->add_flag("--oscillate", oscillate, "cycle through the targets");
  generic->add_option("--depth", depth, "truncation depth of checkpoint distances");
  generic->add_option("--seed", cfg.seed);
  generic->add_option("--out", cfg.out);
  generic->add_option("--config", config.path);

  std::string graph = "gamma-ent";
  auto* entropy = app.add_subcommand("entropy", "return-path counts and recurrence check");
  entropy->add_option("--graph", graph)->check(CLI::IsMember({"gamma-ent"}));
  entropy->add_option("--nmax", cfg.n_max);
  entropy->add_option("--seed", cfg.seed);
  entropy->add_option("--out", cfg.out);
  entropy->add_option("--config", config.path);

  auto* obstruct = app.add_subcommand("obstruct", "minimum distance from periodic orbits to a target");
  obstruct->add_option("--system", system_arg, "xdoubleprime or dyck")->required();
  obstruct->add_option("--target", target_path, "measure (inline or file); defaults to the two-fixed-point target");
  obstruct->add_option("--max-period", cfg.max_period);
  obstruct->add_option("--seed", cfg.seed);
  obstruct->add_option("--out", cfg.out);
  obstruct->add_option("--config", config.path);

  std::vector<std::string> eps_list;
  std::size_t loop_length = 6;
  auto* density = app.add_subcommand("density", "random convex targets approximated by periodic orbits");
  density->add_option("--system", system_arg);
  density->add_option("--trials", cfg.trials);
  density->add_option("--eps", eps_list, "repeatable; default 1/8 1/16 1/32");
  density->add_option("--loop-length", loop_length);
  density->add_option("--seed", cfg.seed);
  density->add_option("--out", cfg.out);
  density->add_option("--config", config.path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  if (*lang) {
    auto sys = system_from_json(system_doc(system_arg));
    bool in;
    if (is_point_text(word)) {
      Point p = parse_point(word, sys->codec());
      in = sys->contains_periodic(p.period()) && sys->contains(p.prefix(p.preperiod_length() + 2 * p.period_length()));
    } else {
      in = sys->contains(parse_word(word, sys->codec()));
    }
    std::cout << (in ? "true" : "false") << "\n";
  } else if (*expand) {
    BetaNumber beta = precision > 0 ? BetaNumber::decimal(beta_text, precision) : parse_beta(beta_text);
    auto d = beta_expand(beta, digits);
    std::string s;
    for (Symbol x : d.digits) s += (s.empty() ? "" : ",") + std::to_string(x);
    std::cout << s << "\n";
  } else if (*dist) {
    auto mu = measure_from_json(json_arg(mu_path));
    auto nu = measure_from_json(json_arg(nu_path));
    if (truncate > 0) {
      mu = mu.truncate(truncate);
      nu = nu.truncate(truncate);
    }
    auto r = dbar(mu, nu);
    if (detail) {
      std::cout << json{{"value", to_string(r.value)},
                        {"lo", to_string(r.lo)},
                        {"hi", to_string(r.hi)},
                        {"forward", to_string(r.forward)},
                        {"backward", to_string(r.backward)},
                        {"forward_attained", r.forward_attained},
                        {"backward_attained", r.backward_attained},
                        {"mode", mu.mode().describe()}}
                       .dump(2)
                << "\n";
    } else if (truncate > 0) {
      std::cout << to_string(r.lo) << "," << to_string(r.hi) << "\n";
    } else {
      std::cout << to_string(r.value) << "\n";
    }
  } else if (*close) {
    auto sys = system_from_json(system_doc(system_arg));
    ClosingOptions opts;
    opts.reuse_periodic = !no_reuse;
    opts.max_length = max_length;
    auto c = close_orbit(*sys, source_of(x_text, sys->codec()), parse_rational(eps_text), N, opts);
    emit(to_json(c, sys->codec()).dump(2) + "\n", out);
  } else if (*lnk) {
    auto sys = system_from_json(system_doc(system_arg));
    LinkOptions opts;
    opts.divisor = divisor;
    opts.a_max = a_max;
    auto c = link(*sys, parse_point(y1_text, sys->codec()), parse_point(y2_text, sys->codec()),
                  parse_rational(lambda_text), parse_rational(eps_text), opts);
    emit(to_json(c, sys->codec()).dump(2) + "\n", out);
  } else if (*approx) {
    auto sys = system_from_json(system_doc(system_arg));
    auto r = approx_convex(*sys, combo_from_json(json_arg(combo_path)), parse_rational(eps_text));
    emit(to_json(r, sys->codec()).dump(2) + "\n", out);
  } else if (*generic) {
    config.apply(cfg, *generic);
    cfg.validate();
    json doc = json_arg(target_path);
    json sys_doc = !system_arg.empty() ? system_doc(system_arg) : doc.value("system", cfg.system);
    if (sys_doc.is_null()) throw Error(ErrorCode::InvalidInput, "no system given");
    auto sys = system_from_json(sys_doc);
    std::vector<Combo> targets;
    if (doc.contains("targets")) {
      for (const auto& c : doc["targets"]) targets.push_back(combo_from_json(c));
    } else {
      targets.push_back(combo_from_json(doc.at("combo")));
    }
    GenericOptions opts;
    opts.depth = depth;
    emit(run_generic(*sys, targets, cfg.horizon, oscillate, cfg.seed, opts).str(), cfg.out);
  } else if (*entropy) {
    config.apply(cfg, *entropy);
    cfg.validate();
    emit(entropy_table(run_entropy(cfg.n_max), cfg.seed).str(), cfg.out);
  } else if (*obstruct) {
    config.apply(cfg, *obstruct);
    auto sys = system_from_json(system_doc(system_arg));
    FinMeasure target = FinMeasure::dirac(Point::constant(0));
    if (!target_path.empty()) {
      target = measure_from_json(json_arg(target_path));
    } else if (sys->kind() == SystemKind::Dyck) {
      target = FinMeasure::exact({{Point::constant(kDyckOpenSquare), Rational(1, 2)},
                                  {Point::constant(kDyckCloseSquare), Rational(1, 2)}});
    } else {
      target = FinMeasure::exact({{Point::constant(0), Rational(1, 3)}, {Point::constant(1), Rational(2, 3)}});
    }
    emit(obstruction_table(run_obstruction(*sys, target, cfg.max_period), cfg.seed, sys->codec()).str(), cfg.out);
  } else if (*density) {
    config.apply(cfg, *density);
    if (density->count("--seed") == 0 && config.path.empty()) {
      throw Error(ErrorCode::InvalidInput, "density needs --seed (or a config with a seed)");
    }
    cfg.validate();
    json sys_doc = !system_arg.empty() ? system_doc(system_arg) : cfg.system;
    if (sys_doc.is_null()) throw Error(ErrorCode::InvalidInput, "no system given");
    auto sys = system_from_json(sys_doc);
    DensityOptions opts;
    for (const auto& e : eps_list) opts.eps.push_back(parse_rational(e));
    opts.loop_length = loop_length;
    auto rows = run_density(*sys, cfg.trials, cfg.seed, opts);
    emit(density_table(rows, cfg.seed, sys->codec()).str(), cfg.out);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const Error& e) {
    std::cerr << "shiftlab: " << e.what() << "\n";
    return is_limit_error(e.code()) ? kExitLimit : kExitInvalid;
  } catch (const json::exception& e) {
    std::cerr << "shiftlab: bad JSON: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::logic_error& e) {
    std::cerr << "shiftlab: internal check failed: " << e.what() << "\n";
    return 1;
  }
}
