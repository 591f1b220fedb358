#include "udpn/io.hpp"
#include "udpn/oracle.hpp"
#include "udpn/reach.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <iostream>

using namespace udpn;
using json = nlohmann::json;

namespace {

enum Exit { kYes = 0, kNo = 1, kInput = 2, kInternal = 3 };

struct Output {
  bool as_json = false;
  std::string verdict;
  std::string witness_path;
  json stats = json::object();
  std::string text; // human-readable body

  int emit(int code) const {
    if (as_json) {
      json j{{"verdict", verdict},
             {"witness-path", witness_path.empty() ? json(nullptr) : json(witness_path)},
             {"stats", stats}};
      std::cout << j.dump(2) << '\n';
    } else {
      std::cout << verdict << '\n' << text;
    }
    return code;
  }
};

struct Inputs {
  std::string net, from, to, run;
  bool allow_reserved = false;

  ParseOptions opt() const { return ParseOptions{allow_reserved}; }
  Net load_net() const { return parse_net(read_file(net), opt()); }
  Marking load_marking(const std::string &path, const Net &n) const {
    return parse_marking(read_file(path), opt(), &n);
  }
};

// Parse errors name the file they came from.
template <class F> auto in_file(const std::string &path, F &&f) -> decltype(f()) {
  try {
    return f();
  } catch (const ParseError &e) {
    throw Error(path + ":" + e.what());
  }
}

Domain domain_of(const std::string &mode) { return mode == "q" ? Domain::Q : Domain::QPlus; }

json stats_json(const ReachStats &s) {
  return json{{"universe", s.universe.size()}, {"variables", s.variables},
              {"constraints", s.constraints},  {"iterations", s.iterations},
              {"lps", s.lps},                  {"pivots", s.pivots}};
}

std::string describe(const Failure &f) {
  std::string s = f.reason;
  if (!f.place.empty())
    s += " at (" + f.place + ", " + f.datum + ")";
  if (!is_zero(f.shortfall))
    s += ", short by " + to_string(f.shortfall);
  return s + " [step " + std::to_string(f.step) + "]\n";
}

void add_inputs(CLI::App *cmd, Inputs &in, bool with_run) {
  cmd->add_option("--net", in.net, "net file")->required();
  cmd->add_option("--from", in.from, "initial marking file")->required();
  cmd->add_option("--to", in.to, "final marking file")->required();
  if (with_run)
    cmd->add_option("--run", in.run, "run file")->required();
  cmd->add_flag("--allow-reserved", in.allow_reserved,
                "accept names with the __copy_, __shadow_ and _d prefixes");
}

void add_mode(CLI::App *cmd, std::string &mode) {
  cmd->add_option("--mode", mode, "q or qplus")
      ->default_val("qplus")
      ->check(CLI::IsMember({"q", "qplus"}));
}

std::uint64_t seed_from_env(std::uint64_t fallback) {
  const char *s = std::getenv("UDPN_SEED");
  if (!s || !*s)
    return fallback;
  try {
    std::size_t used = 0;
    auto v = std::stoull(s, &used);
    if (s[used] != '\0')
      throw Error("");
    return v;
  } catch (...) {
    throw Error(std::string("UDPN_SEED is not a number: '") + s + "'");
  }
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Reachability checks for unordered data Petri nets under continuous semantics"};
  app.require_subcommand(1);
  Output out;
  app.add_flag("--json", out.as_json, "print a JSON verdict record");

  Inputs in;
  std::string mode, engine, witness, out_path, out_net, out_from, out_to, system_path;

  auto *check = app.add_subcommand("check", "decide reachability of --to from --from");
  add_inputs(check, in, false);
  add_mode(check, mode);
  check->add_option("--engine", engine, "qplus engine: support or encoded")
      ->default_val("support")
      ->check(CLI::IsMember({"support", "encoded"}));
  check->add_option("--witness", witness, "write the witness run here");

  auto *validate = app.add_subcommand("validate", "check that a run connects two markings");
  add_inputs(validate, in, true);
  add_mode(validate, mode);

  auto *transform = app.add_subcommand("transform", "rewrite a net and its markings");
  bool loopless = false;
  transform->add_flag("--loopless", loopless, "split every place into itself and a shadow")
      ->required();
  add_inputs(transform, in, false);
  transform->add_option("--out-net", out_net, "output net file (default stdout)");
  transform->add_option("--out-from", out_from, "output initial marking (default stdout)");
  transform->add_option("--out-to", out_to, "output final marking (default stdout)");

  auto *reduce = app.add_subcommand("reduce-data", "shrink the data values used by a run");
  add_inputs(reduce, in, true);
  add_mode(reduce, mode);
  reduce->add_option("--out", out_path, "output run file (default stdout)");

  auto *hist = app.add_subcommand("hist", "decompose a histogram into weighted modes");
  std::string hist_path;
  hist->add_option("file", hist_path, "histogram file")->required();

  auto *oracle = app.add_subcommand("oracle", "reference implementations and generators");
  oracle->require_subcommand(1);
  GenConfig cfg;
  std::string out_dir;
  auto *gen = oracle->add_subcommand("random-run", "write a random net, markings and Q+ run");
  gen->add_option("--seed", cfg.seed, "generator seed (UDPN_SEED overrides)");
  gen->add_option("--places", cfg.max_places)->default_val(cfg.max_places);
  gen->add_option("--transitions", cfg.max_transitions)->default_val(cfg.max_transitions);
  gen->add_option("--vars", cfg.max_vars)->default_val(cfg.max_vars);
  gen->add_option("--data", cfg.max_data)->default_val(cfg.max_data);
  gen->add_option("--steps", cfg.max_steps)->default_val(cfg.max_steps);
  gen->add_option("--out-dir", out_dir, "directory for net.udpn, from.mk, to.mk, run.run")
      ->required();
  Inputs oin;
  auto *naive = oracle->add_subcommand("naive-q", "Q-reachability by the reference emitter");
  add_inputs(naive, oin, false);
  auto *brute = oracle->add_subcommand("brute", "solve an implication system by enumeration");
  brute->add_option("--system", system_path, "system file in dump format")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kInput;
  }

  try {
    if (*check) {
      Net net = in_file(in.net, [&] { return in.load_net(); });
      Marking i = in_file(in.from, [&] { return in.load_marking(in.from, net); });
      Marking f = in_file(in.to, [&] { return in.load_marking(in.to, net); });
      ReachResult r = mode == "q" ? q_reach(net, i, f)
                                  : qplus_reach(net, i, f,
                                                engine == "encoded" ? Engine::Encoded
                                                                    : Engine::Support);
      out.verdict = r.reachable ? "reachable" : "unreachable";
      out.stats = stats_json(r.stats);
      if (r.reachable && r.witness) {
        out.stats["witness-steps"] = r.witness->size();
        out.text = "witness: " + std::to_string(r.witness->size()) + " steps\n";
        if (!witness.empty()) {
          write_file(witness, serialize(*r.witness));
          out.witness_path = witness;
        }
      }
      return out.emit(r.reachable ? kYes : kNo);
    }
    if (*validate) {
      Net net = in_file(in.net, [&] { return in.load_net(); });
      Marking i = in_file(in.from, [&] { return in.load_marking(in.from, net); });
      Marking f = in_file(in.to, [&] { return in.load_marking(in.to, net); });
      // Witness runs may use padding values such as _d0.
      Run run = in_file(in.run, [&] { return parse_run(read_file(in.run), {true}, &net); });
      Verdict v = validate_run(net, i, run, f, domain_of(mode));
      out.verdict = v.ok ? "valid" : "invalid";
      out.witness_path = in.run;
      out.stats = json{{"steps", run.size()}};
      if (v.failure)
        out.text = describe(*v.failure);
      return out.emit(v.ok ? kYes : kNo);
    }
    if (*transform) {
      Net net = in_file(in.net, [&] { return in.load_net(); });
      Marking i = in_file(in.from, [&] { return in.load_marking(in.from, net); });
      Marking f = in_file(in.to, [&] { return in.load_marking(in.to, net); });
      LoopLess ll = to_loopless(net, i, f);
      std::string rest;
      for (auto [path, text] : {std::pair{out_net, serialize(ll.net)},
                                std::pair{out_from, serialize_marking(ll.i)},
                                std::pair{out_to, serialize_marking(ll.f)}})
        path.empty() ? void(rest += text) : write_file(path, text);
      out.verdict = "ok";
      out.stats = json{{"places", ll.net.places().size()},
                       {"transitions", ll.net.transitions().size()}};
      out.text = rest;
      return out.emit(kYes);
    }
    if (*reduce) {
      Net net = in_file(in.net, [&] { return in.load_net(); });
      Marking i = in_file(in.from, [&] { return in.load_marking(in.from, net); });
      Marking f = in_file(in.to, [&] { return in.load_marking(in.to, net); });
      Run run = in_file(in.run, [&] { return parse_run(read_file(in.run), {true}, &net); });
      Domain d = domain_of(mode);
      if (Verdict v = validate_run(net, i, run, f, d); !v.ok) {
        out.verdict = "invalid";
        out.text = describe(*v.failure);
        return out.emit(kNo);
      }
      Run small = reduce_data(net, i, f, run, d);
      out.verdict = "ok";
      out.stats = json{{"data-before", dval(net, run).size()},
                       {"data-after", dval(net, small).size()},
                       {"bound", data_bound_size(net, i, f)}};
      if (out_path.empty()) {
        out.text = serialize(small);
      } else {
        write_file(out_path, serialize(small));
        out.witness_path = out_path;
      }
      return out.emit(kYes);
    }
    if (*hist) {
      Histogram h = in_file(hist_path, [&] { return parse_histogram(read_file(hist_path)); });
      auto parts = decompose(h);
      out.verdict = "ok";
      out.stats = json{{"order", to_string(h.order)}, {"parts", parts.size()}};
      for (auto &p : parts) {
        out.text += "part " + to_string(p.weight) + " {";
        const char *sep = " ";
        for (auto &[x, a] : p.pattern) {
          out.text += sep + x + " -> " + a;
          sep = "; ";
        }
        out.text += p.pattern.empty() ? "}\n" : " }\n";
      }
      return out.emit(kYes);
    }
    if (*gen) {
      cfg.seed = seed_from_env(cfg.seed);
      Rng rng(cfg.seed);
      Net net = random_net(cfg, rng);
      Marking i = random_marking(net, data_pool(cfg), cfg, rng);
      RandomRun rr = random_run(net, i, cfg, data_pool(cfg), rng);
      write_file(out_dir + "/net.udpn", serialize(net));
      write_file(out_dir + "/from.mk", serialize_marking(i));
      write_file(out_dir + "/to.mk", serialize_marking(rr.reached));
      write_file(out_dir + "/run.run", serialize(rr.run));
      out.verdict = "ok";
      out.witness_path = out_dir + "/run.run";
      out.stats = json{{"seed", cfg.seed}, {"steps", rr.run.size()}};
      return out.emit(kYes);
    }
    if (*naive) {
      Net net = in_file(oin.net, [&] { return oin.load_net(); });
      Marking i = in_file(oin.from, [&] { return oin.load_marking(oin.from, net); });
      Marking f = in_file(oin.to, [&] { return oin.load_marking(oin.to, net); });
      bool ok = naive_q_reach(net, i, f);
      out.verdict = ok ? "reachable" : "unreachable";
      return out.emit(ok ? kYes : kNo);
    }
    if (*brute) {
      ImplicationSystem sys =
          in_file(system_path, [&] { return parse_system(read_file(system_path)); });
      LpStats st;
      bool ok = brute_implication(sys, &st);
      out.verdict = ok ? "solvable" : "unsolvable";
      out.stats = json{{"lps", st.lps}};
      return out.emit(ok ? kYes : kNo);
    }
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInput;
  } catch (const InternalError &e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  } catch (const std::exception &e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kInput;
}
