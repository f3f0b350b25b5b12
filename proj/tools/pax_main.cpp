#include <clocale>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "pax/io.hpp"

using namespace pax;
using nlohmann::json;

namespace {

// thrown to unwind to main with a specific process exit code
struct CliExit {
  int code;
};

constexpr int kOk = 0;
constexpr int kAuditFailed = 1;
constexpr int kInvalidModel = 2;
constexpr int kPeaceInfeasible = 3;
constexpr int kBadInput = 64;   // unreadable/malformed input or usage error
constexpr int kIncompatible = 65;
constexpr int kSolverFailure = 70;
constexpr int kWriteFailure = 74;

const char* kUsage =
    "usage: pax <command> [arguments]\n"
    "\n"
    "commands:\n"
    "  validate <model.json>                     check a model file, list problems\n"
    "  plausibility <model.json>                 scope-of-peace test report\n"
    "  construct <model.json> --out <mech.json>  build the constant peaceful menu\n"
    "  audit <model.json> <mech.json>            run all mechanism checks\n"
    "  solve <model.json> --grid N1xN2 --out <mech.json>\n"
    "                                            minimize war probability on a grid\n"
    "  war-region <model.json>                   tabulate the no-settlement region\n"
    "  sweep <model.json> --param <path> --values v1,v2,...\n"
    "                                            comparative-statics CSV\n"
    "\n"
    "flags:\n"
    "  --tol <t>       incentive-gain tolerance for audit (default 1e-6)\n"
    "  --grid <spec>   N or N1xN2: construct/solve grid, war-region cells\n"
    "  --out <path>    output file (mechanism for construct/solve, report otherwise)\n"
    "  --format <f>    text | json (war-region also: csv; sweep is always csv)\n"
    "  --range <spec>  lo:hi:step, alternative to --values\n"
    "  --solve         sweep: add the minimal war probability column\n"
    "  --strict-balance  solve: settlements must divide the whole resource\n";

struct Args {
  std::string command;
  std::vector<std::string> positional;
  std::map<std::string, std::string> flags;
  std::set<std::string> switches;
};

[[noreturn]] void usage_error(const std::string& msg) {
  std::cerr << "error: " << msg << "\n\n" << kUsage;
  throw CliExit{kBadInput};
}

Args parse_args(int argc, char** argv) {
  static const std::set<std::string> value_flags = {"--tol", "--grid", "--out",
                                                    "--format", "--param", "--values", "--range"};
  static const std::set<std::string> switch_flags = {"--solve", "--strict-balance"};
  Args a;
  if (argc < 2) usage_error("missing command");
  a.command = argv[1];
  for (int k = 2; k < argc; ++k) {
    const std::string arg = argv[k];
    if (value_flags.count(arg)) {
      if (k + 1 >= argc) usage_error(arg + " needs a value");
      a.flags[arg] = argv[++k];
    } else if (switch_flags.count(arg)) {
      a.switches.insert(arg);
    } else if (arg.rfind("--", 0) == 0) {
      usage_error("unknown flag " + arg);
    } else {
      a.positional.push_back(arg);
    }
  }
  return a;
}

std::string flag_or(const Args& a, const std::string& name, const std::string& fallback) {
  auto it = a.flags.find(name);
  return it == a.flags.end() ? fallback : it->second;
}

std::pair<int, int> parse_grid(const std::string& spec) {
  const size_t x = spec.find('x');
  try {
    if (x == std::string::npos) {
      const int n = std::stoi(spec);
      return {n, n};
    }
    return {std::stoi(spec.substr(0, x)), std::stoi(spec.substr(x + 1))};
  } catch (const std::exception&) {
    usage_error("cannot parse --grid '" + spec + "'");
  }
}

void emit(const Args& a, const std::string& content) {
  const std::string out = flag_or(a, "--out", "");
  if (out.empty()) {
    std::fputs(content.c_str(), stdout);
  } else {
    std::ofstream f(out);
    if (!f) throw WriteError("cannot write '" + out + "'");
    f << content;
    f.flush();
    if (!f) throw WriteError("cannot write '" + out + "'");
  }
}

CrisisModel load_validated_model(const std::string& path) {
  CrisisModel m = load_model(path);
  const auto errs = validate(m);
  if (!errs.empty()) {
    for (const auto& e : errs) std::cout << "invalid: " << e << "\n";
    throw CliExit{kInvalidModel};
  }
  return m;
}

std::string require_format(const Args& a, const std::set<std::string>& allowed) {
  const std::string f = flag_or(a, "--format", "text");
  if (!allowed.count(f)) usage_error("--format '" + f + "' is not available for this command");
  return f;
}

int cmd_validate(const Args& a) {
  if (a.positional.size() != 1) usage_error("validate needs exactly one model file");
  CrisisModel m = load_model(a.positional[0]);
  const auto errs = validate(m);
  if (errs.empty()) {
    std::cout << "model valid\n";
    return kOk;
  }
  for (const auto& e : errs) std::cout << "invalid: " << e << "\n";
  return kInvalidModel;
}

int cmd_plausibility(const Args& a) {
  if (a.positional.size() != 1) usage_error("plausibility needs exactly one model file");
  const std::string format = require_format(a, {"text", "json"});
  const CrisisModel m = load_validated_model(a.positional[0]);
  const PlausibilityReport r = peace_plausibility(m);
  emit(a, format == "json" ? to_json(r) : to_text(r));
  return kOk;
}

int cmd_construct(const Args& a) {
  if (a.positional.size() != 1) usage_error("construct needs exactly one model file");
  const std::string format = require_format(a, {"text", "json"});
  const std::string out = flag_or(a, "--out", "");
  if (out.empty()) usage_error("construct needs --out for the mechanism file");
  const auto [n1, n2] = parse_grid(flag_or(a, "--grid", "2"));
  const CrisisModel m = load_validated_model(a.positional[0]);
  const ConstructionResult r = construct_peaceful_settlement(m, n1, n2);
  std::fputs((format == "json" ? to_json(r) : to_text(r)).c_str(), stdout);
  if (!r.mechanism) return kPeaceInfeasible;
  save_mechanism(out, *r.mechanism);
  return kOk;
}

int cmd_audit(const Args& a) {
  if (a.positional.size() != 2) usage_error("audit needs a model file and a mechanism file");
  const std::string format = require_format(a, {"text", "json"});
  const CrisisModel m = load_validated_model(a.positional[0]);
  const DirectMechanism mech = load_mechanism(a.positional[1]);
  require_compatible(m, mech);
  AuditOptions opts;
  const std::string tol = flag_or(a, "--tol", "");
  if (!tol.empty()) {
    try {
      opts.ic_tol = std::stod(tol);
    } catch (const std::exception&) {
      usage_error("cannot parse --tol '" + tol + "'");
    }
  }
  const AuditReport r = audit(m, mech, opts);
  emit(a, format == "json" ? to_json(r) : to_text(r));
  return r.passes() ? kOk : kAuditFailed;
}

int cmd_solve(const Args& a) {
  if (a.positional.size() != 1) usage_error("solve needs exactly one model file");
  const std::string format = require_format(a, {"text", "json"});
  const std::string grid = flag_or(a, "--grid", "");
  const std::string out = flag_or(a, "--out", "");
  if (grid.empty()) usage_error("solve needs --grid");
  if (out.empty()) usage_error("solve needs --out for the mechanism file");
  const auto [n1, n2] = parse_grid(grid);
  const CrisisModel m = load_validated_model(a.positional[0]);
  const GridProgram g = build_program(m, n1, n2, a.switches.count("--strict-balance") > 0);
  const SolveResult r = minimize_war_probability(g);
  std::fputs((format == "json" ? to_json(r) : to_text(r)).c_str(), stdout);
  save_mechanism(out, r.mechanism);
  return kOk;
}

int cmd_war_region(const Args& a) {
  if (a.positional.size() != 1) usage_error("war-region needs exactly one model file");
  const std::string format = require_format(a, {"text", "json", "csv"});
  const auto [n1, n2] = parse_grid(flag_or(a, "--grid", "64"));
  if (n1 != n2) {
    std::cerr << "error: war-region uses a single cell count per axis\n";
    throw CliExit{kIncompatible};
  }
  const CrisisModel m = load_validated_model(a.positional[0]);
  const WarRegionReport r = war_region(m, n1);
  if (format == "csv") {
    std::ostringstream os;
    write_csv(os, r);
    emit(a, os.str());
  } else {
    emit(a, format == "json" ? to_json(r) : to_text(r));
  }
  return kOk;
}

json* resolve_path(json& root, const std::string& path) {
  json* cur = &root;
  size_t pos = 0;
  while (pos < path.size()) {
    size_t dot = path.find('.', pos);
    if (dot == std::string::npos) dot = path.size();
    std::string token = path.substr(pos, dot - pos);
    pos = dot + 1;
    // split name from [idx]... suffixes
    std::vector<size_t> indices;
    size_t br = token.find('[');
    std::string name = token.substr(0, br);
    while (br != std::string::npos) {
      const size_t close = token.find(']', br);
      if (close == std::string::npos) return nullptr;
      try {
        indices.push_back(std::stoul(token.substr(br + 1, close - br - 1)));
      } catch (const std::exception&) {
        return nullptr;
      }
      br = token.find('[', close);
    }
    if (!name.empty()) {
      if (!cur->is_object() || !cur->contains(name)) return nullptr;
      cur = &(*cur)[name];
    }
    for (size_t idx : indices) {
      if (!cur->is_array() || idx >= cur->size()) return nullptr;
      cur = &(*cur)[idx];
    }
  }
  return cur;
}

std::vector<double> parse_sweep_values(const Args& a) {
  std::vector<double> vals;
  const std::string list = flag_or(a, "--values", "");
  const std::string range = flag_or(a, "--range", "");
  try {
    if (!list.empty()) {
      std::stringstream ss(list);
      std::string item;
      while (std::getline(ss, item, ',')) {
        if (!item.empty()) vals.push_back(std::stod(item));
      }
    } else if (!range.empty()) {
      const size_t c1 = range.find(':');
      const size_t c2 = range.find(':', c1 == std::string::npos ? range.size() : c1 + 1);
      if (c1 == std::string::npos || c2 == std::string::npos)
        throw std::invalid_argument("range needs lo:hi:step");
      const double lo = std::stod(range.substr(0, c1));
      const double hi = std::stod(range.substr(c1 + 1, c2 - c1 - 1));
      const double step = std::stod(range.substr(c2 + 1));
      if (!(step > 0)) throw std::invalid_argument("step must be positive");
      for (double v = lo; v <= hi + 1e-12 * std::max(1.0, std::abs(hi)); v += step)
        vals.push_back(v);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: bad sweep values: " << e.what() << "\n";
    throw CliExit{kIncompatible};
  }
  return vals;
}

int cmd_sweep(const Args& a) {
  if (a.positional.size() != 1) usage_error("sweep needs exactly one model file");
  const std::string param = flag_or(a, "--param", "");
  if (param.empty()) {
    std::cerr << "error: sweep needs --param\n";
    return kIncompatible;
  }
  const std::vector<double> values = parse_sweep_values(a);
  if (values.empty()) {
    std::cerr << "error: sweep needs a non-empty --values list or --range\n";
    return kIncompatible;
  }
  const bool with_solve = a.switches.count("--solve") > 0;
  const auto [n1, n2] = parse_grid(flag_or(a, "--grid", "5"));

  json doc;
  try {
    std::ifstream f(a.positional[0]);
    if (!f) throw ParseError("cannot read '" + a.positional[0] + "'");
    doc = json::parse(f);
  } catch (const json::exception& e) {
    throw ParseError(std::string("model: ") + e.what());
  }

  std::ostringstream os;
  os << "param,lhs,plausible" << (with_solve ? ",objective" : "") << ",war_region_mass\n";
  for (double v : values) {
    json copy = doc;
    json* leaf = resolve_path(copy, param);
    if (!leaf) {
      std::cerr << "error: parameter path '" << param << "' does not resolve in the model file\n";
      return kIncompatible;
    }
    *leaf = v;
    CrisisModel m = parse_model(copy.dump());
    const auto errs = validate(m);
    if (!errs.empty()) {
      std::cerr << "error: model invalid at " << param << " = " << fmt12(v) << ": "
                << join(errs, "; ") << "\n";
      return kInvalidModel;
    }
    const PlausibilityReport r = peace_plausibility(m);
    const char* label = r.plausible ? (boundary_plausible(r) ? "boundary-yes" : "yes") : "no";
    os << fmt12(v) << ',' << fmt12(r.lhs) << ',' << label;
    if (with_solve) {
      const SolveResult sr = minimize_war_probability(build_program(m, n1, n2));
      os << ',' << fmt12(sr.objective);
    }
    os << ',' << fmt12(war_region(m, 64).mass) << "\n";
  }
  emit(a, os.str());
  return kOk;
}

int run(int argc, char** argv) {
  const Args a = parse_args(argc, argv);
  if (a.command == "validate") return cmd_validate(a);
  if (a.command == "plausibility") return cmd_plausibility(a);
  if (a.command == "construct") return cmd_construct(a);
  if (a.command == "audit") return cmd_audit(a);
  if (a.command == "solve") return cmd_solve(a);
  if (a.command == "war-region") return cmd_war_region(a);
  if (a.command == "sweep") return cmd_sweep(a);
  usage_error("unknown command '" + a.command + "'");
}

}  // namespace

int main(int argc, char** argv) {
  std::setlocale(LC_NUMERIC, "C");
  try {
    return run(argc, argv);
  } catch (const CliExit& e) {
    return e.code;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const IncompatibleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIncompatible;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const WriteError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kWriteFailure;
  } catch (const SolverError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSolverFailure;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kSolverFailure;
  }
}
