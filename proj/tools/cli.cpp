#include "cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <ostream>
#include <sstream>

#include "ietlab/approx/approx.hpp"
#include "ietlab/cli/iet_io.hpp"
#include "ietlab/errors.hpp"
#include "ietlab/menagerie/menagerie.hpp"
#include "ietlab/relations/relations.hpp"
#include "ietlab/rotations/rotations.hpp"
#include "ietlab/suspension/suspension.hpp"

namespace ietlab {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

// Everything a command reports. Identical inputs give identical reports
// except for timing.
struct Report {
  std::string command;
  json inputs = json::array();
  json parameters = json::object();
  json outcome = json::object();
  json witnesses = json::array();
  double wall_ms = 0;
  // Printed verbatim instead of the outcome in text mode.
  std::optional<std::string> text;
  int exit_code = 0;
};

std::string fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

IetFile load(Report& r, const std::string& path) {
  const std::string bytes = read_bytes(path);
  r.inputs.push_back(json{{"path", path}, {"fnv1a64", fnv1a64(bytes)}});
  try {
    return parse_iet_file(bytes);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what(), 0, 0);
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(path + ": " + e.what());
  }
}

std::vector<Iet> load_all(Report& r, const std::vector<std::string>& paths) {
  std::vector<Iet> out;
  for (const auto& p : paths) out.push_back(load(r, p).map);
  return out;
}

json num(const QuadNum& x) { return x.str(); }

json nums(const std::vector<QuadNum>& xs) {
  json out = json::array();
  for (const auto& x : xs) out.push_back(x.str());
  return out;
}

json points(const Domain& d, const std::vector<Point>& ps) {
  json out = json::array();
  for (const auto& p : ps) out.push_back(point_str(d, p));
  return out;
}

QuadNum literal(const std::string& text, const char* what) {
  try {
    return QuadNum::parse(text);
  } catch (const ParseError& e) {
    throw ParseError(std::string("--") + what + ": " + e.what(), 0, 0);
  }
}

Point parse_point(const Domain& d, const std::string& text) {
  const auto colon = text.rfind(':');
  if (colon == std::string::npos) return normalize_point(d, Point{0, literal(text, "x")});
  return normalize_point(d, Point{d.index_of(text.substr(0, colon)), literal(text.substr(colon + 1), "x")});
}

// Writes h to `path` when given, else makes it the printed result.
void emit_iet(Report& r, const Iet& h, const std::string& path, const std::string& key = "iet") {
  if (!path.empty()) {
    write_iet(path, h);
    r.witnesses.push_back(path);
    r.outcome[key + "_file"] = path;
    return;
  }
  r.outcome[key] = serialize_iet(h);
  r.text = serialize_iet(h);
}

std::string scalar_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::string out;
    for (const auto& x : v) {
      if (!out.empty()) out += x.is_array() ? "; " : ", ";
      out += scalar_text(x);
    }
    return out;
  }
  return v.dump();
}

void render(const Report& r, bool as_json, std::ostream& out) {
  if (as_json) {
    json j{{"command", r.command},   {"inputs", r.inputs},       {"parameters", r.parameters},
           {"outcome", r.outcome},   {"witnesses", r.witnesses}, {"timing", json{{"wall_ms", r.wall_ms}}}};
    out << j.dump(2) << '\n';
    return;
  }
  if (r.text) {
    out << *r.text;
    return;
  }
  for (const auto& [key, value] : r.outcome.items()) {
    if (value.is_string() && value.get<std::string>().find('\n') != std::string::npos) {
      out << key << ":\n" << value.get<std::string>();
      continue;
    }
    out << key << ": " << scalar_text(value) << '\n';
  }
}

fs::path output_in(const std::string& dir, const std::string& name) {
  fs::create_directories(dir);
  return fs::path(dir) / name;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact computations with interval exchange transformations.", "ietlab"};
  app.require_subcommand(1);
  app.fallthrough();
  bool as_json = false;
  app.add_flag("--json", as_json, "Print the full report as JSON");

  std::string in_a, in_b, out_path, perm_text, dir, x_text, lambda_text, epsilon_text, l_text, tau_text;
  std::vector<std::string> inputs;
  int depth = 64, n_check = 20, retries = 3, nmax = 40, radius = 2, example_n = 1, semigroup_depth = 10;
  long q = 2, k_cap = 64;
  long long cap = 1000000, cell_cap = 10000000;
  bool table = false;

  auto* compose_cmd = app.add_subcommand("compose", "a o b (b acts first)");
  compose_cmd->add_option("a", in_a, "Outer map")->required();
  compose_cmd->add_option("b", in_b, "Inner map")->required();
  compose_cmd->add_option("-o,--output", out_path, "Write the result here");

  auto* invert_cmd = app.add_subcommand("invert", "Inverse map");
  invert_cmd->add_option("a", in_a)->required();
  invert_cmd->add_option("-o,--output", out_path);

  auto* canon_cmd = app.add_subcommand("canon", "Parse and re-serialize in canonical form");
  canon_cmd->add_option("a", in_a)->required();
  canon_cmd->add_option("-o,--output", out_path);

  auto* info_cmd = app.add_subcommand("info", "Discontinuities, rotation flags and certificate checks");
  info_cmd->add_option("a", in_a)->required();

  auto* norm_cmd = app.add_subcommand("norm", "Bounds on the growth rate of discontinuities");
  norm_cmd->add_option("a", in_a)->required();
  norm_cmd->add_option("--nmax", nmax, "Largest power for the slope bound")->capture_default_str();

  auto* model_cmd = app.add_subcommand("minimal-model", "Certified minimal model and norm");
  model_cmd->add_option("a", in_a)->required();
  model_cmd->add_option("--depth", depth, "Orbit search depth")->capture_default_str();
  model_cmd->add_option("--check", n_check, "Verify d(h_m^n) = n d(h_m) for n up to this")->capture_default_str();
  model_cmd->add_option("--retries", retries, "Depth doublings before giving up")->capture_default_str();
  model_cmd->add_option("--conjugator-out", out_path, "Write the conjugator here");
  model_cmd->add_option("--model-out", dir, "Write the model here");

  auto* drift_cmd = app.add_subcommand("drift", "Drift direction and drift vector of a permutation");
  drift_cmd->add_option("--perm", perm_text, "1-based images, e.g. \"3,2,1\"")->required();

  auto* adm_cmd = app.add_subcommand("admissible", "Admissibility of a permutation");
  adm_cmd->add_option("--perm", perm_text, "1-based images, e.g. \"1,3,2\"")->required();

  auto* hunt_cmd = app.add_subcommand("relation-hunt", "Search a relation [t^k u t^-k, u] between S and T");
  hunt_cmd->add_option("s", in_a)->required();
  hunt_cmd->add_option("t", in_b)->required();
  hunt_cmd->add_option("--q", q, "Rationality scale q >= 2")->capture_default_str();
  hunt_cmd->add_option("--kcap", k_cap, "Largest conjugating power tried")->capture_default_str();
  hunt_cmd->add_option("--epsilon", epsilon_text, "Grid neighbourhood radius reported in the certificate");
  hunt_cmd->add_option("--witness-dir", dir, "Write U and T^k U T^-k here");

  auto* rat_cmd = app.add_subcommand("rationalize", "Rational generators with the same marked ball");
  rat_cmd->add_option("generators", inputs)->required();
  rat_cmd->add_option("--radius", radius, "Word length R")->capture_default_str();
  rat_cmd->add_option("--out-dir", dir, "Write the rational generators here");
  rat_cmd->add_option("--cell-cap", cell_cap, "Largest grid allowed")->capture_default_str();

  auto* group_cmd = app.add_subcommand("finite-group", "Order of the group generated by rational IETs");
  group_cmd->add_option("generators", inputs)->required();
  group_cmd->add_option("--cap", cap, "Largest order allowed")->capture_default_str();
  group_cmd->add_flag("--table", table, "Also print the multiplication table");

  auto* ball_cmd = app.add_subcommand("orbit-ball", "Points reached by words of length <= R");
  ball_cmd->add_option("generators", inputs)->required();
  ball_cmd->add_option("--x", x_text, "Start point, \"<id>:<coord>\" or a coordinate on the first component")->required();
  ball_cmd->add_option("--radius", radius, "Word length R")->capture_default_str();

  auto* example_cmd = app.add_subcommand("example", "Constructions from the theory");
  example_cmd->require_subcommand(1);
  auto* sym_cmd = example_cmd->add_subcommand("sym", "Symmetric group inside the two-generator example");
  sym_cmd->add_option("--n", example_n, "Embed the symmetric group on n+2 blocks")->capture_default_str();
  sym_cmd->add_option("--lambda", lambda_text, "Rotation amplitude (default (sqrt(2)-1)/2^k)");
  sym_cmd->add_option("--out-dir", dir, "Write the generators here");
  auto* free_cmd = example_cmd->add_subcommand("free-semigroup", "Distinctness of positive words in r and r'");
  free_cmd->add_option("--depth", semigroup_depth, "Largest word length")->capture_default_str();
  free_cmd->add_option("--lambda", lambda_text, "Rotation amplitude");
  auto* circle_cmd = example_cmd->add_subcommand("circle-2-3", "Rotation of [0,l) by tau rolled into a circle");
  circle_cmd->add_option("--l", l_text)->required();
  circle_cmd->add_option("--tau", tau_text)->required();
  circle_cmd->add_option("-o,--output", out_path, "Write the map with its certificate here");

  std::vector<const char*> argv{"ietlab"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  Report r;
  const auto start = std::chrono::steady_clock::now();
  try {
    if (compose_cmd->parsed()) {
      r.command = "compose";
      const Iet a = load(r, in_a).map, b = load(r, in_b).map;
      const Iet c = compose(a, b);
      r.outcome["discontinuities"] = discontinuity_count(c);
      emit_iet(r, c, out_path);
    } else if (invert_cmd->parsed()) {
      r.command = "invert";
      const Iet inv = invert(load(r, in_a).map);
      r.outcome["discontinuities"] = discontinuity_count(inv);
      emit_iet(r, inv, out_path);
    } else if (canon_cmd->parsed()) {
      r.command = "canon";
      const IetFile f = load(r, in_a);
      const std::string text = serialize_iet_file(f);
      if (out_path.empty()) {
        r.outcome["iet"] = text;
        r.text = text;
      } else {
        write_iet_file(out_path, f);
        r.witnesses.push_back(out_path);
        r.outcome["iet_file"] = out_path;
      }
    } else if (info_cmd->parsed()) {
      r.command = "info";
      const IetFile f = load(r, in_a);
      const Iet& h = f.map;
      r.outcome["pieces"] = h.pieces().size();
      r.outcome["discontinuities"] = points(h.source(), discontinuities(h));
      r.outcome["d"] = discontinuity_count(h);
      r.outcome["automorphism"] = h.is_automorphism();
      if (h.is_automorphism()) {
        const auto flags = is_virtual_multi_rotation(h);
        r.outcome["virtual_multi_rotation"] = flags.virtual_multi_rotation;
        r.outcome["multi_rotation"] = flags.multi_rotation;
        json certs = json::array();
        for (const auto& c : f.circle_certs) certs.push_back(verify_irrational_circle(h, c));
        r.outcome["circle_certs_verified"] = certs;
      }
    } else if (norm_cmd->parsed()) {
      r.command = "norm";
      r.parameters["nmax"] = nmax;
      const NormBounds b = norm_bounds(load(r, in_a).map, nmax);
      r.outcome["slope_upper"] = b.slope_upper.get_str();
      r.outcome["upper"] = b.upper;
      r.outcome["lower"] = b.lower;
      r.outcome["certified"] = b.certified;
    } else if (model_cmd->parsed()) {
      r.command = "minimal-model";
      r.parameters = json{{"depth", depth}, {"n_check", n_check}, {"max_retries", retries}};
      const Iet h = load(r, in_a).map;
      try {
        const NormCertificate cert = minimal_model(h, MinimalModelOptions{depth, n_check, retries});
        r.outcome["norm"] = cert.norm;
        r.outcome["verified_up_to"] = cert.verified_up_to;
        r.outcome["search_depth"] = cert.search_depth;
        r.outcome["model_discontinuities"] = discontinuity_count(cert.h_m);
        if (!out_path.empty()) {
          write_iet(out_path, cert.conjugator);
          r.witnesses.push_back(out_path);
        }
        if (!dir.empty()) {
          write_iet(dir, cert.h_m);
          r.witnesses.push_back(dir);
        }
      } catch (const ModelVerificationFailure& e) {
        r.outcome["status"] = "unverified";
        r.outcome["failing_n"] = e.failing_n();
        r.outcome["reason"] = e.what();
        r.exit_code = 1;
      }
    } else if (drift_cmd->parsed()) {
      r.command = "drift";
      const Permutation sigma = Permutation::parse(perm_text);
      r.parameters["perm"] = sigma.str();
      const DriftOutcome d = drift_direction(sigma);
      r.outcome["admissible"] = d.drift.has_value();
      if (d.drift) {
        r.outcome["dl"] = nums(d.drift->dl);
        r.outcome["dr"] = nums(d.drift->dr);
        r.outcome["dr_min"] = num(d.drift->dr_min);
        r.outcome["dr_max"] = num(d.drift->dr_max);
      } else {
        r.outcome["vanishing_coordinate"] = *d.vanishing_coordinate;
      }
    } else if (adm_cmd->parsed()) {
      r.command = "admissible";
      const Permutation sigma = Permutation::parse(perm_text);
      r.parameters["perm"] = sigma.str();
      const bool ok = is_admissible(sigma);
      r.outcome["admissible"] = ok;
      r.text = ok ? "true\n" : "false\n";
    } else if (hunt_cmd->parsed()) {
      r.command = "relation-hunt";
      const Iet s = load(r, in_a).map, t = load(r, in_b).map;
      RelationOptions opts;
      opts.k_cap = k_cap;
      if (!epsilon_text.empty()) opts.epsilon = literal(epsilon_text, "epsilon");
      // Drift data of T's permutation sets the default epsilon.
      if (t.source().size() == 1 && !t.source().is_circle(0)) {
        const auto d = drift_direction(interval_coding(t).sigma);
        if (d.drift) opts.drift = d.drift;
      }
      r.parameters = json{{"q", q}, {"k_cap", k_cap}};
      const auto cert = relation_certificate(s, t, q, opts);
      if (!cert) {
        r.outcome["status"] = "no relation found";
        r.exit_code = 1;
      } else {
        r.outcome["status"] = "relation";
        r.outcome["word"] = cert->word.str();
        r.outcome["word_length"] = cert->word.size();
        r.outcome["reduced_length"] = free_reduce(cert->word).size();
        r.outcome["exponent"] = cert->exponent;
        r.outcome["epsilon"] = num(cert->epsilon);
        r.outcome["k"] = cert->k;
        r.outcome["supp_u"] = cert->support_u.str();
        r.outcome["supp_u_near_grid"] = cert->support_near_grid;
        if (!dir.empty()) {
          const auto u_path = output_in(dir, "U.iet");
          write_iet(u_path, cert->u);
          r.witnesses.push_back(u_path.string());
          const auto v_path = output_in(dir, "TkUTk_inv.iet");
          write_iet(v_path, conjugate(power(t, cert->k), cert->u));
          r.witnesses.push_back(v_path.string());
        }
      }
    } else if (rat_cmd->parsed()) {
      r.command = "rationalize";
      r.parameters = json{{"radius", radius}, {"cell_cap", cell_cap}};
      const auto gens = load_all(r, inputs);
      RationalizeOptions opts;
      opts.quotient.cell_cap = cell_cap;
      const Rationalization res = rationalize(gens, radius, opts);
      std::size_t trivial = 0;
      for (const auto& p : res.trace.word_pattern) trivial += p.trivial ? 1 : 0;
      r.outcome["words"] = res.trace.word_pattern.size();
      r.outcome["trivial_words"] = trivial;
      r.outcome["constraints"] = res.trace.system.size();
      r.outcome["grid"] = res.quotient.grid;
      r.outcome["group_order"] = res.quotient.group_size ? json(res.quotient.group_size->get_str()) : json(nullptr);
      json lengths = json::array();
      for (const auto& g : res.generators) lengths.push_back(nums(interval_coding(g).lengths));
      r.outcome["rational_lengths"] = lengths;
      r.outcome["warnings"] = res.warnings;
      if (!dir.empty())
        for (std::size_t i = 0; i < res.generators.size(); ++i) {
          const auto path = output_in(dir, fs::path(inputs[i]).stem().string() + ".rational.iet");
          write_iet(path, res.generators[i]);
          r.witnesses.push_back(path.string());
        }
    } else if (group_cmd->parsed()) {
      r.command = "finite-group";
      r.parameters = json{{"cap", cap}, {"table", table}};
      const auto gens = load_all(r, inputs);
      FiniteGroupOptions opts;
      opts.cap = cap;
      opts.list_elements = table;
      opts.multiplication_table = table;
      const FiniteGroup g = enumerate_finite_group(gens, opts);
      r.outcome["grid"] = g.grid;
      r.outcome["order"] = g.order.get_str();
      if (table) r.outcome["table"] = g.table;
    } else if (ball_cmd->parsed()) {
      r.command = "orbit-ball";
      const auto gens = load_all(r, inputs);
      if (gens.empty()) throw InvalidArgument("orbit-ball needs at least one generator");
      const Point x = parse_point(gens.front().source(), x_text);
      r.parameters = json{{"x", point_str(gens.front().source(), x)}, {"radius", radius}};
      const auto ball = orbit_ball(gens, x, radius);
      const std::size_t m = translation_amplitude_count(gens);
      Integer bound = 1;
      for (std::size_t i = 0; i < m; ++i) bound *= 2 * radius + 1;
      r.outcome["size"] = ball.size();
      r.outcome["amplitudes"] = m;
      r.outcome["bound"] = bound.get_str();
      r.outcome["points"] = points(gens.front().source(), ball);
    } else if (sym_cmd->parsed()) {
      r.command = "example sym";
      const QuadNum lambda = lambda_text.empty() ? default_lambda(example_n) : literal(lambda_text, "lambda");
      r.parameters = json{{"n", example_n}, {"lambda", num(lambda)}};
      const ExampleGroup g = build_example_group(lambda);
      const SymmetricEmbedding emb = symmetric_embedding(g, example_n);
      long long factorial = 1;
      for (int k = 2; k <= example_n + 2; ++k) factorial *= k;
      r.outcome["blocks"] = emb.blocks.size();
      r.outcome["permutation_group_order"] = emb.permutation_group_order;
      r.outcome["iet_group_order"] = emb.iet_group_order;
      r.outcome["expected_order"] = factorial;
      json words = json::array();
      for (const auto& w : emb.words) words.push_back(free_reduce(w).str(kExampleAlphabet));
      r.outcome["generator_words"] = words;
      r.outcome["block_permutations"] = emb.block_permutations;
      if (emb.permutation_group_order != factorial || emb.iet_group_order != factorial) r.exit_code = 1;
      if (!dir.empty())
        for (std::size_t k = 0; k < emb.generators.size(); ++k) {
          const auto path = output_in(dir, "sigma_" + std::to_string(k) + ".iet");
          write_iet(path, emb.generators[k]);
          r.witnesses.push_back(path.string());
        }
    } else if (free_cmd->parsed()) {
      r.command = "example free-semigroup";
      const QuadNum lambda = lambda_text.empty() ? default_lambda(1) : literal(lambda_text, "lambda");
      r.parameters = json{{"depth", semigroup_depth}, {"lambda", num(lambda)}};
      const FreeSemigroupReport rep = free_semigroup_check(build_example_group(lambda), semigroup_depth);
      r.outcome["words"] = rep.words;
      r.outcome["distinct"] = rep.distinct;
      r.outcome["fixed_point_criterion"] = rep.fixed_point_criterion;
      if (!rep.distinct || !rep.fixed_point_criterion) r.exit_code = 1;
    } else if (circle_cmd->parsed()) {
      r.command = "example circle-2-3";
      const QuadNum l = literal(l_text, "l"), tau = literal(tau_text, "tau");
      r.parameters = json{{"l", num(l)}, {"tau", num(tau)}};
      const Iet h = example_2_3(l, tau);
      const auto cert = roll_up_two_interval(h, Arc{0, QuadNum(0), l});
      r.outcome["irrational_circle"] = cert.has_value();
      r.outcome["support"] = support(h).str();
      if (cert) {
        r.outcome["certificate_verified"] = verify_irrational_circle(h, *cert);
        r.outcome["angle"] = num(cert->angle);
      } else {
        long order = 1;
        for (Iet p = h; !p.is_identity(); p = compose(h, p)) ++order;
        r.outcome["order"] = order;
      }
      if (!out_path.empty()) {
        IetFile f{kDefaultRadicand, h, {}};
        if (cert) f.circle_certs.push_back(*cert);
        if (!l.is_rational()) f.radicand = l.radicand();
        if (!tau.is_rational()) f.radicand = tau.radicand();
        write_iet_file(out_path, f);
        r.witnesses.push_back(out_path);
      }
    }
  } catch (const ParseError& e) {
    err << "input error: " << e.what() << '\n';
    return 2;
  } catch (const InvalidArgument& e) {
    err << "input error: " << e.what() << '\n';
    return 2;
  } catch (const DomainMismatch& e) {
    err << "input error: " << e.what() << '\n';
    return 2;
  } catch (const FieldMismatch& e) {
    err << "input error: " << e.what() << '\n';
    return 2;
  } catch (const CapExceeded& e) {
    err << "gave up: " << e.what() << '\n';
    return 1;
  } catch (const VerificationFailure& e) {
    err << "verification failed: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  render(r, as_json, out);
  return r.exit_code;
}

}  // namespace ietlab
