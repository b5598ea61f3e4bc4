// Command-line front end. Parses one job, runs it against a fresh table
// store (optionally warmed from table files and a cache directory), and
// prints the result as canonical JSON or TSV. Exit codes: 0 success,
// 1 malformed input, 2 undetermined result, 3 violated internal invariant.

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "stnabla/steinberg.hpp"
#include "stnabla/verify.hpp"

using namespace stnabla;
using njson = nlohmann::ordered_json;

namespace {

struct Options {
  std::string type = "A";
  int rank = 1;
  int p = 3;
  int r = 1;
  bool assume_donkin = false;
  std::vector<std::string> table_paths;
  std::string output = "json";
  std::string cache_dir;

  std::string lambda, mu, nu, sigma, target, bound, suite;
};

bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

Weight weight_arg(const std::string& text, int rank) {
  if (text.empty()) return Weight::zero(rank);
  return parse_weight(text, rank);
}

njson int_json(const Int& v) {
  static const Int lo = std::numeric_limits<std::int64_t>::min();
  static const Int hi = std::numeric_limits<std::int64_t>::max();
  if (v >= lo && v <= hi) return njson(v.convert_to<std::int64_t>());
  return njson(v.str());
}

njson entries_json(const std::map<Weight, Int, WeightLess>& m) {
  njson out = njson::object();
  for (const auto& [w, v] : m) out[weight_key(w)] = int_json(v);
  return out;
}

njson strings_json(const std::vector<std::string>& v) {
  njson out = njson::array();
  for (const auto& s : v) out.push_back(s);
  return out;
}

njson blocked_json(const std::map<Weight, std::string, WeightLess>& m) {
  njson out = njson::object();
  for (const auto& [w, s] : m) out[weight_key(w)] = s;
  return out;
}

// Fields assemble through a sorted map so repeated runs are byte-identical.
using Fields = std::map<std::string, njson>;

njson params_json(const Options& opt, const Fields& weights) {
  Fields all;
  for (const auto& [k, v] : weights) all[k] = v;
  if (opt.assume_donkin) all["assume_donkin"] = true;
  all["p"] = opt.p;
  all["r"] = opt.r;
  all["rank"] = opt.rank;
  all["type"] = opt.type;
  njson out = njson::object();
  for (const auto& [k, v] : all) out[k] = v;
  return out;
}

void print_json(const Fields& fields) {
  njson doc = njson::object();
  for (const auto& [k, v] : fields) doc[k] = v;
  std::cout << doc.dump() << "\n";
}

int print_map_result(const Options& opt, const std::string& kind, const Fields& params,
                     const MultiplicityMap& map) {
  if (opt.output == "tsv") {
    for (const auto& [w, v] : map.entries) std::cout << to_string(w) << '\t' << v.str() << '\n';
    return map.complete ? 0 : 2;
  }
  Fields fields;
  fields["kind"] = kind;
  fields["params"] = params_json(opt, params);
  fields["entries"] = entries_json(map.entries);
  fields["hypotheses"] = strings_json(map.hypotheses);
  fields["status"] = map.complete ? "complete" : "partial";
  if (!map.complete) fields["residual"] = entries_json(map.residual);
  if (!map.blocked.empty()) fields["blocked"] = blocked_json(map.blocked);
  print_json(fields);
  return map.complete ? 0 : 2;
}

int print_expansion(const Options& opt, const std::string& kind, const Fields& params,
                    const NablaExpansion& entries,
                    const std::vector<std::string>& hypotheses = {}) {
  if (opt.output == "tsv") {
    for (const auto& [w, v] : entries) std::cout << to_string(w) << '\t' << v.str() << '\n';
    return 0;
  }
  Fields fields;
  fields["kind"] = kind;
  fields["params"] = params_json(opt, params);
  fields["entries"] = entries_json(entries);
  fields["hypotheses"] = strings_json(hypotheses);
  fields["status"] = "complete";
  print_json(fields);
  return 0;
}

int print_scalar(const Options& opt, const std::string& kind, const Fields& params, const Int& value,
                 Fields extra = {}, const std::vector<std::string>& hypotheses = {}) {
  if (opt.output == "tsv") {
    std::cout << value.str() << "\n";
    return 0;
  }
  Fields fields = std::move(extra);
  fields["kind"] = kind;
  fields["params"] = params_json(opt, params);
  fields["hypotheses"] = strings_json(hypotheses);
  fields["status"] = "complete";
  fields["value"] = int_json(value);
  print_json(fields);
  return 0;
}

// Advisory exclusive lock on <dir>/lock, held for the duration of a cache
// read or write.
class CacheLock {
 public:
  explicit CacheLock(const std::string& dir) {
    fd_ = ::open((dir + "/lock").c_str(), O_CREAT | O_RDWR, 0644);
    if (fd_ >= 0) ::flock(fd_, LOCK_EX);
  }
  ~CacheLock() {
    if (fd_ >= 0) {
      ::flock(fd_, LOCK_UN);
      ::close(fd_);
    }
  }

 private:
  int fd_ = -1;
};

std::string cache_file(const Options& opt, const std::string& kind) {
  std::ostringstream name;
  name << opt.cache_dir << "/" << opt.type << opt.rank << "_p" << opt.p << "_" << kind << ".json";
  return name.str();
}

void cache_load(ModularTables& tables, const Options& opt) {
  if (opt.cache_dir.empty()) return;
  std::filesystem::create_directories(opt.cache_dir);
  CacheLock lock(opt.cache_dir);
  for (const char* kind : {"simple", "tilting"}) {
    std::string path = cache_file(opt, kind);
    if (std::filesystem::exists(path)) tables.load_table(path);
  }
}

void cache_store(ModularTables& tables, const Options& opt) {
  if (opt.cache_dir.empty()) return;
  CacheLock lock(opt.cache_dir);
  for (const char* kind : {"simple", "tilting"}) {
    CharTable t = tables.snapshot(kind);
    if (!t.entries.empty()) t.save(cache_file(opt, kind));
  }
}

int run_verify(const Options& opt) {
  if (opt.suite.empty()) throw input_error("verify needs --suite; available: a1-core, form-axioms, sl5-counterexample");
  auto results = run_verify_suite(opt.suite);
  bool ok = true;
  for (const auto& r : results) {
    if (!r.pass) ok = false;
    std::printf("%s %-28s %7.2fs  %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.seconds,
                r.detail.c_str());
  }
  return ok ? 0 : 1;
}

int run_job(const Options& opt, const std::string& command) {
  if (command == "verify") return run_verify(opt);

  if (!is_prime(opt.p)) throw input_error("p must be prime");
  if (opt.r < 1) throw input_error("r must be at least 1");

  ModularTables tables(opt.type.at(0), opt.rank, opt.p, opt.assume_donkin);
  cache_load(tables, opt);
  for (const auto& path : opt.table_paths) tables.load_table(path);

  const Weight la = weight_arg(opt.lambda, opt.rank);
  const Weight mu = weight_arg(opt.mu, opt.rank);
  int code = 0;

  if (command == "char") {
    const DominantTable& table = tables.chi().dominant_table(la);
    Fields extra;
    extra["dim"] = int_json(table.dim);
    if (opt.output == "tsv") {
      for (const auto& [w, v] : table.mult) std::cout << to_string(w) << '\t' << v.str() << '\n';
    } else {
      Fields fields;
      fields["kind"] = "char";
      fields["params"] = params_json(opt, {{"lambda", weight_key(la)}});
      fields["entries"] = entries_json(table.mult);
      fields["hypotheses"] = strings_json({});
      fields["status"] = "complete";
      fields["dim"] = int_json(table.dim);
      print_json(fields);
    }
  } else if (command == "expand") {
    NablaExpansion product = nabla_product(tables.chi(), NablaExpansion{{la, Int(1)}},
                                           NablaExpansion{{mu, Int(1)}}, opt.p, 0);
    code = print_expansion(opt, "expand", {{"lambda", weight_key(la)}, {"mu", weight_key(mu)}},
                           product);
  } else if (command == "jsf") {
    code = print_expansion(opt, "jsf", {{"lambda", weight_key(la)}},
                           jantzen_nabla(tables.rs(), la, opt.p));
  } else if (command == "simple" || command == "tilting") {
    TableEntry entry = command == "simple" ? tables.simple(la) : tables.tilting(la);
    std::vector<std::string> hypotheses;
    if (entry.donkin_hypothesis) hypotheses.push_back(kHypDigitTilting);
    Fields fields;
    if (opt.output == "tsv") {
      for (const auto& [w, v] : entry.coeffs) std::cout << to_string(w) << '\t' << v.str() << '\n';
    } else {
      fields["kind"] = command;
      fields["params"] = params_json(opt, {{"lambda", weight_key(la)}});
      fields["entries"] = entries_json(entry.coeffs);
      fields["hypotheses"] = strings_json(hypotheses);
      fields["status"] = "complete";
      fields["provenance"] = provenance_name(entry.provenance);
      print_json(fields);
    }
  } else if (command == "tensor-decompose") {
    auto dec = tables.decompose_into_tiltings(nabla_product(
        tables.chi(), NablaExpansion{{la, Int(1)}}, NablaExpansion{{mu, Int(1)}}, opt.p, 0));
    MultiplicityMap map;
    map.kind = "tensor";
    map.entries = dec.mult;
    map.residual = dec.residual;
    map.complete = dec.complete;
    code = print_map_result(opt, "tensor", {{"lambda", weight_key(la)}, {"mu", weight_key(mu)}},
                            map);
  } else if (command == "t-numbers" || command == "s-numbers") {
    SteinbergContext ctx(tables, opt.r);
    MultiplicityMap map = command == "t-numbers" ? ctx.t_numbers(la, mu) : ctx.s_numbers(la, mu);
    code = print_map_result(opt, map.kind, {{"lambda", weight_key(la)}, {"mu", weight_key(mu)}},
                            map);
  } else if (command == "d-numbers" || command == "p-numbers") {
    SteinbergContext ctx(tables, opt.r);
    MultiplicityMap map = command == "d-numbers" ? ctx.d_numbers(la) : ctx.p_numbers(la);
    code = print_map_result(opt, map.kind, {{"lambda", weight_key(la)}}, map);
  } else if (command == "homdim-gr" || command == "homdim-gfq") {
    if (opt.target.empty()) throw input_error(command + " needs --target-chi");
    Weight target = parse_weight(opt.target, opt.rank);
    SteinbergContext ctx(tables, opt.r);
    NablaExpansion m{{target, Int(1)}};
    Int value = command == "homdim-gr" ? ctx.hom_dim_gr(la, m) : ctx.hom_dim_gfq(la, m);
    code = print_scalar(opt, command, {{"lambda", weight_key(la)}, {"target", weight_key(target)}},
                        value);
  } else if (command == "form") {
    SteinbergContext ctx(tables, opt.r);
    Weight nu = weight_arg(opt.nu, opt.rank);
    Weight sigma = weight_arg(opt.sigma, opt.rank);
    FormComparison cmp = ctx.form_tilting_vs_simple(la, sigma, nu, mu);
    Fields extra;
    extra["certified"] = strings_json(cmp.certified);
    extra["unverified"] = strings_json(cmp.unverified);
    extra["predicted"] = cmp.predicted ? int_json(*cmp.predicted) : njson("none");
    code = print_scalar(opt, "form",
                        {{"lambda", weight_key(la)},
                         {"mu", weight_key(mu)},
                         {"nu", weight_key(nu)},
                         {"sigma", weight_key(sigma)}},
                        cmp.value, std::move(extra), cmp.hypotheses);
  } else if (command == "reciprocity") {
    SteinbergContext ctx(tables, opt.r);
    Weight sigma = weight_arg(opt.sigma, opt.rank);
    ReciprocityResult res = ctx.reciprocity_check(la, sigma, mu);
    if (opt.output == "tsv") {
      std::cout << res.lhs.str() << '\t' << res.rhs.str() << '\t' << res.verdict << '\n';
    } else {
      Fields fields;
      fields["kind"] = "reciprocity";
      fields["params"] = params_json(
          opt, {{"lambda", weight_key(la)}, {"mu", weight_key(mu)}, {"sigma", weight_key(sigma)}});
      fields["lhs"] = int_json(res.lhs);
      fields["rhs"] = int_json(res.rhs);
      fields["verdict"] = res.verdict;
      fields["hypotheses"] = strings_json(res.notes);
      fields["status"] = "complete";
      print_json(fields);
    }
  } else if (command == "donkin-check") {
    SteinbergContext ctx(tables, opt.r);
    Weight bound = weight_arg(opt.bound, opt.rank);
    DonkinReport rep = ctx.donkin_criterion(la, bound);
    if (opt.output == "tsv") {
      std::cout << (rep.consistent ? "consistent" : "inconsistent") << '\t'
                << (rep.conclusive ? "conclusive" : "inconclusive") << '\t' << rep.checked << '\n';
    } else {
      Fields fields;
      fields["kind"] = "donkin";
      fields["params"] =
          params_json(opt, {{"bound", weight_key(bound)}, {"lambda", weight_key(la)}});
      fields["consistent"] = rep.consistent;
      fields["conclusive"] = rep.conclusive;
      fields["checked"] = rep.checked;
      fields["failures"] = strings_json(rep.failures);
      if (!rep.blocked.empty()) fields["blocked"] = blocked_json(rep.blocked);
      fields["hypotheses"] = strings_json({});
      fields["status"] = rep.conclusive ? "complete" : "partial";
      print_json(fields);
    }
    code = rep.conclusive ? 0 : 2;
  } else {
    throw input_error("unknown command '" + command + "'");
  }

  cache_store(tables, opt);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  if (const char* env = std::getenv("STNABLA_CACHE_DIR")) opt.cache_dir = env;

  CLI::App app{"Exact characters and decompositions around Steinberg tensor products"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--type", opt.type, "Cartan type letter (A, B, C, D, G)")
      ->check(CLI::IsMember({"A", "B", "C", "D", "G"}));
  app.add_option("--rank", opt.rank, "rank of the root system")->check(CLI::Range(1, 4));
  app.add_option("--p", opt.p, "prime characteristic");
  app.add_option("--r", opt.r, "Frobenius level");
  app.add_flag("--assume-donkin", opt.assume_donkin,
               "assume the tilting conjecture where p >= 2h-2 fails");
  app.add_option("--table", opt.table_paths, "character table file to load (repeatable)");
  app.add_option("--output", opt.output, "output format")->check(CLI::IsMember({"json", "tsv"}));
  app.add_option("--cache-dir", opt.cache_dir,
                 "table cache directory (env STNABLA_CACHE_DIR)");

  struct Spec {
    const char* name;
    const char* about;
    bool lambda, mu, nu, sigma, target, bound;
  };
  const Spec specs[] = {
      {"char", "weight multiplicities and dimension of a Weyl character", true, false, false, false, false, false},
      {"expand", "product of two Weyl characters in the Weyl character basis", true, true, false, false, false, false},
      {"form", "bracket of a hat tilting character against a simple character", true, true, true, true, false, false},
      {"jsf", "Jantzen sum formula character of a Weyl module", true, false, false, false, false, false},
      {"simple", "simple character in the Weyl character basis", true, false, false, false, false, false},
      {"tilting", "indecomposable tilting character in the Weyl character basis", true, false, false, false, false, false},
      {"tensor-decompose", "tilting decomposition of a product of Weyl characters", true, true, false, false, false, false},
      {"t-numbers", "tilting multiplicities of T((q-1)rho+mu) tensor nabla(lambda)", true, true, false, false, false, false},
      {"s-numbers", "socle multiplicities of T((q-1)rho+mu) tensor nabla(lambda)", true, true, false, false, false, false},
      {"d-numbers", "Frobenius-kernel injective multiplicities of St tensor L(lambda)", true, false, false, false, false, false},
      {"p-numbers", "finite-group projective multiplicities of St tensor L(lambda)", true, false, false, false, false, false},
      {"homdim-gr", "Frobenius-kernel Hom dimension from T((q-1)rho+lambda)", true, false, false, false, true, false},
      {"homdim-gfq", "finite-group Hom dimension from T((q-1)rho+lambda)", true, false, false, false, true, false},
      {"reciprocity", "tilting multiplicity against decomposition multiplicity", true, true, false, true, false, false},
      {"donkin-check", "bracket test of Frobenius-kernel indecomposability", true, false, false, false, false, true},
  };
  for (const Spec& s : specs) {
    CLI::App* sub = app.add_subcommand(s.name, s.about);
    if (s.lambda) sub->add_option("--lambda", opt.lambda, "weight, comma-separated coordinates");
    if (s.mu) sub->add_option("--mu", opt.mu, "weight, comma-separated coordinates");
    if (s.nu) sub->add_option("--nu", opt.nu, "weight, comma-separated coordinates");
    if (s.sigma) sub->add_option("--sigma", opt.sigma, "weight, comma-separated coordinates");
    if (s.target) sub->add_option("--target-chi", opt.target, "Weyl character to probe against");
    if (s.bound) sub->add_option("--bound", opt.bound, "search bound, comma-separated coordinates");
  }
  CLI::App* verify = app.add_subcommand("verify", "run a named verification suite");
  verify->add_option("--suite", opt.suite, "a1-core, form-axioms, or sl5-counterexample");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    return run_job(opt, app.get_subcommands().front()->get_name());
  } catch (const input_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const undetermined_error& e) {
    std::cerr << "undetermined: " << e.what() << "\n";
    return 2;
  } catch (const invariant_error& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 3;
  }
}
