#pragma once

// Command-line front end. run() is the whole program; tools/liesym.cpp only
// forwards argv so tests can drive commands in-process.
//
// exit codes: 0 ok / admitted / PASS, 1 usage or input error,
//             2 rejected / FAIL, 3 quarantined catalog entry

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "liesym/catalog.hpp"
#include "liesym/jordan.hpp"
#include "liesym/liealg.hpp"
#include "liesym/odesys.hpp"
#include "liesym/parse.hpp"
#include "liesym/symmetry.hpp"

namespace liesym::cli {

using json = nlohmann::ordered_json;

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

inline std::string need_string(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j[key].is_string()) throw InputError(where + ": missing string field '" + key + "'");
  return j[key].get<std::string>();
}

inline OdeSystem system_from_json(const json& j, const std::string& where = "system") {
  ParamMap params;
  if (j.contains("params")) {
    if (!j["params"].is_object()) throw InputError(where + ": 'params' must be an object");
    for (const auto& [k, v] : j["params"].items()) {
      if (!v.is_number()) throw InputError(where + ": parameter '" + k + "' must be a number");
      if (is_variable_name(k)) throw InputError(where + ": '" + k + "' is a variable, not a parameter");
      params[k] = v.get<double>();
    }
  }
  return OdeSystem(parse(need_string(j, "F", where)), parse(need_string(j, "G", where)), params);
}

inline Generator generator_from_json(const json& j, const std::string& where = "generator") {
  if (j.contains("linear")) {
    const json& l = j["linear"];
    try {
      LinearGenerator g;
      g.k1 = l.value("k1", 0.0);
      g.k2 = l.value("k2", 0.0);
      if (l.contains("A")) {
        const json& A = l["A"];
        if (!A.is_array() || A.size() != 2 || A[0].size() != 2 || A[1].size() != 2)
          throw InputError(where + ": 'A' must be a 2x2 array");
        g.A = Mat2{A[0][0].get<double>(), A[0][1].get<double>(), A[1][0].get<double>(), A[1][1].get<double>()};
      }
      if (l.contains("zeta")) {
        const json& z = l["zeta"];
        if (!z.is_array() || z.size() != 2) throw InputError(where + ": 'zeta' must have two entries");
        g.zeta = {num(z[0].get<double>()), num(z[1].get<double>())};
      }
      return g.expand();
    } catch (const json::exception& e) {
      throw InputError(where + ": " + e.what());
    }
  }
  return Generator(parse(need_string(j, "xi", where)), parse(need_string(j, "eta1", where)),
                   parse(need_string(j, "eta2", where)));
}

/// "c1,...,cn" with exactly n entries.
inline std::vector<double> parse_vector(const std::string& text, std::size_t n, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      double v = std::stod(item, &used);
      while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
      if (used != item.size() || !std::isfinite(v)) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw InputError(std::string(what) + ": '" + item + "' is not a number");
    }
  }
  if (out.size() != n)
    throw InputError(std::string(what) + ": expected " + std::to_string(n) + " comma-separated numbers, got " +
                     std::to_string(out.size()));
  return out;
}

/// name=value
inline std::pair<std::string, double> parse_assignment(const std::string& s) {
  auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0) throw InputError("expected name=value, got '" + s + "'");
  auto v = parse_vector(s.substr(eq + 1), 1, s.substr(0, eq).c_str());
  return {s.substr(0, eq), v[0]};
}

/// name=lo:hi
inline void apply_domain(SamplingDomain& d, const std::vector<std::string>& specs) {
  for (const auto& s : specs) {
    auto eq = s.find('=');
    auto colon = s.find(':', eq == std::string::npos ? 0 : eq);
    if (eq == std::string::npos || colon == std::string::npos) throw InputError("expected var=lo:hi, got '" + s + "'");
    std::string name = s.substr(0, eq);
    double lo = parse_vector(s.substr(eq + 1, colon - eq - 1), 1, "domain")[0];
    double hi = parse_vector(s.substr(colon + 1), 1, "domain")[0];
    if (!(lo < hi)) throw InputError("empty interval for '" + name + "'");
    d.set(name, lo, hi);
  }
}

inline std::uint64_t default_seed() {
  if (const char* s = std::getenv("LIESYM_SEED"); s && *s) {
    try {
      std::size_t used = 0;
      unsigned long long v = std::stoull(s, &used);
      if (used == std::string(s).size()) return v;
    } catch (const std::exception&) {
    }
    throw InputError(std::string("LIESYM_SEED is not an unsigned integer: '") + s + "'");
  }
  return kDefaultSeed;
}

inline json binding_json(const Binding& b) {
  json j = json::object();
  for (const auto& [k, v] : b) j[k] = v;
  return j;
}

inline json verdict_json(const Verdict& v) {
  json j;
  j["verdict"] = v.admitted ? "admitted" : "rejected";
  j["max_residual"] = v.max_residual;
  j["points"] = v.points;
  if (v.witness) {
    j["witness"] = binding_json(*v.witness);
    j["witness_residual"] = {v.witness_residual[0], v.witness_residual[1]};
  }
  return j;
}

inline std::string verdict_text(const Verdict& v) {
  std::ostringstream os;
  if (v.admitted) {
    os << "admitted (max relative residual " << format_number(v.max_residual) << " over " << v.points << " points)";
  } else {
    os << "rejected: residual (" << format_number(v.witness_residual[0]) << ", "
       << format_number(v.witness_residual[1]) << ") at";
    for (const auto& [k, val] : *v.witness) os << ' ' << k << '=' << format_number(val);
  }
  return os.str();
}

/// "X5 + 0.5*X6", "0"
inline std::string element_text(const AlgebraElement& c) {
  std::string out;
  for (int i = 0; i < 8; ++i) {
    double v = c[i];
    if (v == 0.0) continue;
    std::string name = "X" + std::to_string(i + 1);
    double a = std::abs(v);
    std::string term = a == 1.0 ? name : format_number(a) + "*" + name;
    if (out.empty())
      out = (v < 0 ? "-" : "") + term;
    else
      out += (v < 0 ? " - " : " + ") + term;
  }
  return out.empty() ? "0" : out;
}

inline json rep_json(const OptimalRep& r, const AlgebraElement& input) {
  json j;
  j["algebra"] = r.algebra;
  j["input"] = input;
  j["family"] = r.family;
  j["label"] = r.label;
  json p = json::object();
  for (const auto& [k, v] : r.params) p[k] = v;
  j["params"] = p;
  json w = json::array();
  for (const auto& s : r.word) {
    json step{{"step", s.name()}};
    if (s.kind == WordStep::Kind::automorphism) step["param"] = s.param;
    w.push_back(step);
  }
  j["word"] = w;
  j["scale"] = r.scale;
  j["representative"] = r.representative;
  j["representative_text"] = element_text(r.representative);
  return j;
}

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

struct CommonFlags {
  bool as_json = false;
  bool timings = false;
};

inline void emit(const Streams& io, const CommonFlags& f, json j, const std::string& text,
                 std::chrono::steady_clock::time_point t0) {
  if (f.timings) {
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    j["timings"] = {{"total_ms", ms}};
  }
  if (f.as_json)
    io.out << j.dump(2) << '\n';
  else {
    io.out << text;
    if (f.timings) io.out << "time: " << j["timings"]["total_ms"].get<double>() << " ms\n";
  }
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  Streams io{out, err};
  CLI::App app{"Lie point symmetries of systems y'' = F(x,y,z), z'' = G(x,y,z)", "liesym"};
  app.require_subcommand(1);
  CommonFlags flags;
  app.add_flag("--json", flags.as_json, "JSON output");
  app.add_flag("--timings", flags.timings, "report wall-clock time");

  // check
  std::string sys_file, gen_file;
  double tol = -1.0;
  int samples = 200;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> domain_specs, sets;
  auto* check = app.add_subcommand("check", "does a system admit a generator");
  check->add_option("system", sys_file, "system JSON file")->required();
  check->add_option("generator", gen_file, "generator JSON file")->required();
  auto add_output = [&](CLI::App* sc) {
    sc->add_flag("--json", flags.as_json, "JSON output");
    sc->add_flag("--timings", flags.timings, "report wall-clock time");
  };
  auto add_sampling = [&](CLI::App* sc, double default_tol) {
    sc->add_option("--tol", tol, "relative tolerance")->default_str(format_number(default_tol));
    sc->add_option("--samples", samples, "sample points")->check(CLI::PositiveNumber);
    sc->add_option("--seed", seed, "sampling seed (default: LIESYM_SEED or built-in)");
    sc->add_option("--domain", domain_specs, "sampling interval var=lo:hi (repeatable)");
    sc->add_option("--set", sets, "parameter name=value (repeatable)");
    add_output(sc);
  };
  add_sampling(check, 1e-9);

  // normalize
  std::string vec_text, algebra = "L8";
  auto* norm = app.add_subcommand("normalize", "optimal-system representative of c1X1 + ... + c8X8");
  norm->add_option("vector", vec_text, "c1,...,c8")->required();
  norm->add_option("--algebra", algebra, "L4, L6 or L8")->check(CLI::IsMember({"L4", "L6", "L8"}));
  add_output(norm);

  // jordan
  std::string mat_text;
  double tol_defect = -1.0;
  auto* jord = app.add_subcommand("jordan", "real Jordan form of a 2x2 matrix");
  jord->add_option("--matrix", mat_text, "a11,a12,a21,a22")->required();
  jord->add_option("--tol", tol_defect, "discriminant band (default 1e-9 max(1,|A|)^2)");
  add_output(jord);

  // commutator
  std::vector<std::string> comm_args;
  auto* comm = app.add_subcommand("commutator", "bracket of basis operators i j, or of two generator files");
  comm->add_option("operands", comm_args, "i j | file1 file2")->expected(2)->required();
  add_output(comm);

  // catalog
  auto* cat = app.add_subcommand("catalog", "classified families");
  cat->require_subcommand(1);
  auto* cat_list = cat->add_subcommand("list", "list entries");
  add_output(cat_list);
  std::string cat_id;
  auto* cat_verify = cat->add_subcommand("verify", "verify an entry's claimed generators");
  cat_verify->add_option("--id", cat_id, "entry id")->required();
  add_sampling(cat_verify, 1e-8);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  auto t0 = std::chrono::steady_clock::now();
  try {
    std::uint64_t the_seed = seed ? *seed : default_seed();
    ParamMap overrides;
    for (const auto& s : sets) {
      auto [k, v] = parse_assignment(s);
      overrides[k] = v;
    }

    if (*check) {
      double t = tol < 0 ? 1e-9 : tol;
      OdeSystem sys0 = system_from_json(read_json_file(sys_file), sys_file);
      ParamMap params = sys0.params();
      for (const auto& [k, v] : overrides) params[k] = v;
      OdeSystem sys(sys0.F(), sys0.G(), params);
      Generator g = generator_from_json(read_json_file(gen_file), gen_file).bound(params);
      SamplingDomain dom = SamplingDomain::standard();
      apply_domain(dom, domain_specs);
      dom.samples = samples;
      dom.seed = the_seed;
      Verdict v = admits(sys, g, dom, t);
      json j;
      j["command"] = "check";
      j["system"] = {{"F", print(sys.F())}, {"G", print(sys.G())}, {"params", binding_json(params)}};
      j["generator"] = {{"xi", print(g.xi())}, {"eta1", print(g.eta1())}, {"eta2", print(g.eta2())}};
      j["tol"] = t;
      j["samples"] = samples;
      j["seed"] = the_seed;
      j.update(verdict_json(v));
      emit(io, flags, j, verdict_text(v) + "\n", t0);
      return v.admitted ? 0 : 2;
    }

    if (*norm) {
      auto c = parse_vector(vec_text, 8, "vector");
      AlgebraElement e{};
      std::copy(c.begin(), c.end(), e.begin());
      OptimalRep r = algebra == "L4" ? normalize_L4(e) : algebra == "L6" ? normalize_L6(e) : normalize_L8(e);
      json j{{"command", "normalize"}};
      j.update(rep_json(r, e));
      std::ostringstream os;
      os << algebra << " family " << r.family << ": " << r.label;
      for (const auto& [k, v] : r.params) os << ", " << k << " = " << format_number(v);
      os << "\nrepresentative: " << element_text(r.representative) << "\nword:";
      for (const auto& s : r.word)
        os << ' ' << s.name() << (s.kind == WordStep::Kind::automorphism ? "(" + format_number(s.param) + ")" : "");
      if (r.word.empty()) os << " (none)";
      os << "\nscale: " << format_number(r.scale) << '\n';
      emit(io, flags, j, os.str(), t0);
      return 0;
    }

    if (*jord) {
      auto m = parse_vector(mat_text, 4, "matrix");
      Mat2 A{m[0], m[1], m[2], m[3]};
      Jordan2Result r = classify2x2(A, tol_defect);
      auto mat = [](const Mat2& M) { return json::array({{M.a11, M.a12}, {M.a21, M.a22}}); };
      json j{{"command", "jordan"}, {"kind", std::string(to_string(r.kind))}};
      if (r.kind == JordanKind::J1)
        j["params"] = {{"a11", r.a11}, {"a22", r.a22}};
      else if (r.kind == JordanKind::J2)
        j["params"] = {{"a11", r.a11}, {"re", r.re}, {"rotation", r.rotation}};
      else
        j["params"] = {{"a11", r.a11}};
      j["J"] = mat(r.J);
      j["P"] = mat(r.P);
      j["residual"] = r.residual(A);
      std::ostringstream os;
      os << to_string(r.kind) << " J = [[" << format_number(r.J.a11) << ", " << format_number(r.J.a12) << "], ["
         << format_number(r.J.a21) << ", " << format_number(r.J.a22) << "]]\nP = [[" << format_number(r.P.a11)
         << ", " << format_number(r.P.a12) << "], [" << format_number(r.P.a21) << ", " << format_number(r.P.a22)
         << "]]\n";
      emit(io, flags, j, os.str(), t0);
      return 0;
    }

    if (*comm) {
      auto as_index = [](const std::string& s) -> int {
        if (s.size() == 1 && s[0] >= '1' && s[0] <= '8') return s[0] - '0';
        return 0;
      };
      int i = as_index(comm_args[0]), k = as_index(comm_args[1]);
      json j{{"command", "commutator"}};
      if (i && k) {
        AlgebraElement b = bracket(basis(i), basis(k));
        j["i"] = i;
        j["j"] = k;
        j["bracket"] = b;
        j["text"] = element_text(b);
        emit(io, flags, j, "[X" + std::to_string(i) + ", X" + std::to_string(k) + "] = " + element_text(b) + "\n", t0);
        return 0;
      }
      if (i || k) throw InputError("operands must be two indices in 1..8 or two generator files");
      Generator g1 = generator_from_json(read_json_file(comm_args[0]), comm_args[0]);
      Generator g2 = generator_from_json(read_json_file(comm_args[1]), comm_args[1]);
      Generator b = commutator_vf(g1, g2);
      j["bracket"] = {{"xi", print(b.xi())}, {"eta1", print(b.eta1())}, {"eta2", print(b.eta2())}};
      emit(io, flags, j, print(b) + "\n", t0);
      return 0;
    }

    if (*cat_list) {
      json arr = json::array();
      std::ostringstream os;
      for (const auto& e : list_entries()) {
        json ps = json::array();
        for (const auto& p : e.params) {
          json q{{"name", p.name}, {"default", p.def}};
          if (p.choices.empty())
            q["range"] = {p.lo, p.hi};
          else
            q["choices"] = p.choices;
          if (!p.avoid.empty()) q["avoid"] = p.avoid;
          ps.push_back(q);
        }
        arr.push_back({{"id", e.id}, {"description", e.description}, {"quarantined", e.quarantined}, {"params", ps}});
        os << e.id << (e.quarantined ? " [quarantined]" : "") << "  " << e.description << '\n';
      }
      emit(io, flags, json{{"command", "catalog list"}, {"entries", arr}}, os.str(), t0);
      return 0;
    }

    if (*cat_verify) {
      const CatalogEntry& e = find_entry(cat_id);
      VerifyOptions opt{tol < 0 ? 1e-8 : tol, samples, the_seed};
      std::optional<SamplingDomain> dom;
      if (!domain_specs.empty()) {
        dom = e.domain;
        apply_domain(*dom, domain_specs);
      }
      EntryReport r = verify_entry(e, overrides, opt, dom);
      json j{{"command", "catalog verify"}, {"id", r.id}, {"params", binding_json(r.params)}};
      j["result"] = r.quarantined ? "QUARANTINED" : (r.pass ? "PASS" : "FAIL");
      j["pass"] = r.pass;
      j["quarantined"] = r.quarantined;
      if (r.quarantined) j["note"] = r.note;
      j["tol"] = opt.tol;
      j["samples"] = opt.samples;
      j["seed"] = opt.seed;
      json gens = json::array();
      std::ostringstream os;
      os << r.id << ": " << j["result"].get<std::string>() << '\n';
      for (const auto& g : r.generators) {
        json gj{{"name", g.name}, {"role", g.role}};
        gj.update(verdict_json(g.verdict));
        gens.push_back(gj);
        os << "  " << g.name << " (" << g.role << "): " << verdict_text(g.verdict) << '\n';
      }
      j["generators"] = gens;
      if (r.quarantined) os << "  note: " << r.note << '\n';
      emit(io, flags, j, os.str(), t0);
      if (r.quarantined) return 3;
      return r.pass ? 0 : 2;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace liesym::cli
