#pragma once

// Command-line front end. Every subcommand writes its machine-readable result
// to `out` (JSON, or one of the text file formats) and diagnostics to `err`.
// Exit codes: 0 success, 1 invalid input, 2 search budget exhausted.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "stsd/core.hpp"
#include "stsd/decompose.hpp"
#include "stsd/gadgets.hpp"
#include "stsd/generators.hpp"
#include "stsd/pipeline.hpp"
#include "stsd/structure.hpp"
#include "stsd/sts.hpp"

namespace stsd::cli {

using json = nlohmann::ordered_json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitExhausted = 2;

namespace detail {

// Counts that could exceed 2^53 are written as strings.
inline json count(std::uint64_t v) {
  if (v > (std::uint64_t{1} << 53)) return std::to_string(v);
  return v;
}

inline json rational(const Rational& q) {
  return json{{"num", q.num}, {"den", q.den}, {"value", to_string(q)}};
}

inline json counts(const std::vector<std::uint64_t>& v) {
  json arr = json::array();
  for (auto x : v) arr.push_back(count(x));
  return arr;
}

inline json copy_json(const K222Copy& k) {
  json parts = json::array();
  for (const auto& p : k.parts) parts.push_back({p[0], p[1]});
  return parts;
}

inline json gadget_json(const GadgetRecord& g) {
  return json{{"parts", copy_json(g.copy)},
              {"profile_p1", counts(g.profile1.counts)},
              {"profile_p2", counts(g.profile2.counts)},
              {"witness_colours", g.witness_colours}};
}

inline json structure_json(const StructureReport& s) {
  return json{{"x_size", s.x.size()},
              {"y_size", s.y.size()},
              {"x", s.x},
              {"y", s.y},
              {"inside_colour", s.inside_colour},
              {"cross_colour", s.cross_colour},
              {"mismatch_count", count(s.mismatch_count)},
              {"mismatch_fraction", s.mismatch_fraction}};
}

inline std::string read_file(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Colouring load_colouring(const std::string& path) {
  std::istringstream in(read_file(path));
  return read_colouring(in);
}

inline TripleSystem load_system(const std::string& path) {
  std::istringstream in(read_file(path));
  return read_triple_system(in);
}

/// Writes text to `path`, or to `out` when path is empty or "-".
inline void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw InvalidInput("cannot write '" + path + "'");
  f << text;
}

inline std::string system_text(const TripleSystem& s) {
  std::ostringstream ss;
  write_triple_system(ss, s);
  return ss.str();
}

/// Graph input: either an edge list ("n" then "a b" lines), or a single line
/// "K <n>" optionally followed by "minus-shadows <copies file>".
inline SimpleGraph load_graph(const std::string& path) {
  const std::string text = read_file(path);
  std::istringstream in(text);
  std::string line;
  if (!stsd::detail::next_content_line(in, line)) throw InvalidInput("graph file is empty");
  const auto tok = stsd::detail::split_ws(line);
  if (!tok.empty() && tok[0] == "K") {
    if (tok.size() != 2 && tok.size() != 4) throw InvalidInput("expected 'K <n>' or 'K <n> minus-shadows <file>'");
    const int n = static_cast<int>(stsd::detail::parse_int(tok[1], "n"));
    SimpleGraph g = SimpleGraph::complete(n);
    if (tok.size() == 4) {
      if (tok[2] != "minus-shadows") throw InvalidInput("expected 'minus-shadows', got '" + tok[2] + "'");
      std::filesystem::path copies_path(tok[3]);
      if (copies_path.is_relative() && path != "-") copies_path = std::filesystem::path(path).parent_path() / copies_path;
      std::istringstream copies_in(read_file(copies_path.string()));
      const auto copies = read_copies(copies_in, n);
      g = minus(g, shadow(copies, n));
    }
    return g;
  }
  std::istringstream again(text);
  return read_edge_list(again);
}

// Numbers stay numbers in the echoed config; anything else is kept as text.
inline json scalar(const std::string& text) {
  const json parsed = json::parse(text, nullptr, false);
  return parsed.is_number() ? parsed : json(text);
}

// Resolved option values of a subcommand, keyed by long name.
inline json resolved_config(const CLI::App& sub) {
  json cfg = json::object();
  cfg["command"] = sub.get_name();
  for (const CLI::Option* opt : sub.get_options()) {
    std::string name = opt->get_single_name();
    if (name == "help" || name.empty()) continue;
    if (opt->get_expected_max() == 0) {
      cfg[name] = opt->count() > 0;
      continue;
    }
    if (opt->count() > 0) {
      const auto res = opt->results();
      if (res.size() == 1) {
        cfg[name] = scalar(res.front());
      } else {
        json list = json::array();
        for (const auto& v : res) list.push_back(scalar(v));
        cfg[name] = list;
      }
    } else {
      cfg[name] = scalar(opt->get_default_str());
    }
  }
  return cfg;
}

}  // namespace detail

struct GlobalOptions {
  int workers = 1;
  bool no_timing = false;
};

class Runner {
 public:
  Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int run(const std::vector<std::string>& args) {
    CLI::App app{"Steiner triple systems under colourings of K_n^(3): construction, discrepancy, gadgets and structure"};
    app.option_defaults()->always_capture_default();
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--workers", global_.workers, "worker threads (results do not depend on this)")->check(CLI::Range(1, 256));
    app.add_flag("--no-timing", global_.no_timing, "omit elapsed time from JSON output");

    int code = kExitOk;
    add_generate(app, code);
    add_construct(app, code);
    add_discrepancy(app, code);
    add_count_gadgets(app, code);
    add_collect_gadgets(app, code);
    add_recover_structure(app, code);
    add_decompose(app, code);
    add_boost(app, code);
    add_trade_search(app, code);
    add_baseline(app, code);
    add_enumerate(app, code);
    add_analyze(app, code);
    add_verify(app, code);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
      app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
      out_ << app.help();
      return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
      out_ << app.help("", CLI::AppFormatMode::All);
      return kExitOk;
    } catch (const CLI::ParseError& e) {
      err_ << "error: " << e.what() << "\n\n" << app.help();
      return kExitInvalid;
    } catch (const InvalidInput& e) {
      err_ << "error: " << e.what() << '\n';
      return kExitInvalid;
    }
    return code;
  }

 private:
  using Clock = std::chrono::steady_clock;

  void start() { t0_ = Clock::now(); }

  void finish_json(json& doc, const CLI::App& sub) {
    json head = json::object();
    head["schema"] = 1;
    json cfg = detail::resolved_config(sub);
    cfg["workers"] = global_.workers;
    head["config"] = cfg;
    for (auto& [k, v] : doc.items()) head[k] = v;
    if (!global_.no_timing)
      head["elapsed"] = std::chrono::duration<double>(Clock::now() - t0_).count();
    out_ << head.dump(2) << '\n';
  }

  // Wraps a subcommand body: maps InvalidInput to exit 1.
  template <class Body>
  void guarded(int& code, Body&& body) {
    try {
      start();
      code = body();
    } catch (const InvalidInput& e) {
      err_ << "error: " << e.what() << '\n';
      code = kExitInvalid;
    }
  }

  void add_generate(CLI::App& app, int& code) {
    auto* sub = app.add_subcommand("generate", "write a colouring file");
    auto opt = std::make_shared<struct GenerateOpts>();
    sub->add_option("--kind", opt->kind, "example1 | balanced | mono | random | perturb")
        ->check(CLI::IsMember({"example1", "balanced", "mono", "random", "perturb"}));
    sub->add_option("--n", opt->n, "order");
    sub->add_option("--r", opt->r, "number of colours");
    sub->add_option("--x-size", opt->x_size, "|X| for example1");
    sub->add_option("--cross", opt->cross, "colour of triples meeting both parts");
    sub->add_option("--inside", opt->inside, "colour of triples inside a part");
    sub->add_option("--colour", opt->colour, "colour for mono");
    sub->add_option("--seed", opt->seed, "random seed");
    sub->add_option("--flips", opt->flips, "triples recoloured by perturb");
    sub->add_option("--input", opt->input, "base colouring for perturb");
    sub->add_flag("--sparse", opt->sparse, "write the sparse 'default=' format");
    sub->add_option("--output", opt->output, "output path (default stdout)");
    sub->callback([this, sub, opt, &code] {
      (void)sub;
      guarded(code, [&] {
        Colouring chi;
        if (opt->kind == "example1" || opt->kind == "balanced") {
          SplitSpec spec{opt->n, opt->kind == "balanced" ? balanced_split_size(opt->n) : opt->x_size, opt->cross,
                         opt->inside, opt->r};
          chi = example1_colouring(spec);
        } else if (opt->kind == "mono") {
          chi = Colouring::constant(opt->n, opt->r, opt->colour);
        } else if (opt->kind == "random") {
          chi = random_colouring(opt->n, opt->r, opt->seed);
        } else {
          if (opt->input.empty()) throw InvalidInput("perturb needs --input");
          chi = perturb(detail::load_colouring(opt->input), opt->flips, opt->seed);
        }
        std::ostringstream ss;
        if (opt->sparse)
          write_colouring_sparse(ss, chi);
        else
          write_colouring(ss, chi);
        detail::emit(opt->output, ss.str(), out_);
        return kExitOk;
      });
    });
  }

  struct GenerateOpts {
    std::string kind = "random";
    int n = 7;
    int r = 2;
    int x_size = 0;
    int cross = 1;
    int inside = 2;
    int colour = 1;
    std::uint64_t seed = 0;
    std::uint64_t flips = 0;
    std::string input;
    bool sparse = false;
    std::string output;
  };

  void add_construct(CLI::App& app, int& code) {
    auto* sub = app.add_subcommand("construct", "write a Steiner triple system of order n");
    auto n = std::make_shared<int>(7);
    auto seed = std::make_shared<std::int64_t>(-1);
    auto output = std::make_shared<std::string>();
    sub->add_option("--n", *n, "order, n = 1 or 3 (mod 6)");
    sub->add_option("--embed-seed", *seed, "apply a random relabelling with this seed (-1: none)");
    sub->add_option("--output", *output, "output path (default stdout)");
    sub->callback([this, n, seed, output, &code] {
      guarded(code, [&] {
        TripleSystem s = construct_sts(*n);
        if (*seed >= 0) s = random_embedding(s, static_cast<std::uint64_t>(*seed));
        detail::emit(*output, detail::system_text(s), out_);
        return kExitOk;
      });
    });
  }

  void add_discrepancy(CLI::App& app, int& code) {
    auto* sub = app.add_subcommand("discrepancy", "evaluate a system against a colouring");
    auto system = std::make_shared<std::string>();
    auto colouring = std::make_shared<std::string>();
    sub->add_option("--system", *system, "triple system file")->required();
    sub->add_option("--colouring", *colouring, "colouring file")->required();
    sub->callback([this, sub, system, colouring, &code] {
      guarded(code, [&] {
        const TripleSystem s = detail::load_system(*system);
        const Colouring chi = detail::load_colouring(*colouring);
        const ColourProfile p = colour_profile(s, chi);
        json doc{{"n", s.n()}, {"r", chi.r()}, {"triples", p.total}, {"counts", detail::counts(p.counts)}};
        doc["discrepancy"] = s.empty() ? json(nullptr) : detail::rational(discrepancy(p));
        finish_json(doc, *sub);
        return kExitOk;
      });
    });
  }

  void add_count_gadgets(CLI::App& app, int& code) {
    auto* sub = app.add_subcommand("count-gadgets", "count gadgets exactly or estimate their density");
    struct Opts {
      std::string colouring, mode = "exact";
      std::uint64_t samples = 100000, seed = 0;
      int cap = kDefaultExactCap;
    };
    auto o = std::make_shared<Opts>();
    sub->add_option("--colouring", o->colouring, "colouring file")->required();
    sub->add_option("--mode", o->mode, "exact | sampled")->check(CLI::IsMember({"exact", "sampled"}));
    sub->add_option("--samples", o->samples, "random copies for sampled mode");
    sub->add_option("--seed", o->seed, "random seed");
    sub->add_option("--cap", o->cap, "largest n for exact mode");
    sub->callback([this, sub, o, &code] {
      guarded(code, [&] {
        const Colouring chi = detail::load_colouring(o->colouring);
        json doc{{"n", chi.n()}, {"r", chi.r()}, {"mode", o->mode}, {"copies", detail::count(k222_copy_count(chi.n()))}};
        if (o->mode == "exact") {
          const auto c = count_gadgets_exact(chi, o->cap, global_.workers);
          doc["count"] = detail::count(c);
          const auto copies = k222_copy_count(chi.n());
          doc["density"] = copies ? static_cast<double>(c) / static_cast<double>(copies) : 0.0;
        } else {
          const auto est = estimate_gadget_density(chi, o->samples, o->seed, global_.workers);
          doc["density"] = est.estimate;
          doc["standard_error"] = est.standard_error;
          doc["samples"] = detail::count(est.samples);
        }
        finish_json(doc, *sub);
        return kExitOk;
      });
    });
  }

  void add_collect_gadgets(CLI::App& app, int& code) {
    auto* sub = app.add_subcommand("collect-gadgets", "find gadgets by seeded random probing");
    struct Opts {
      std::string colouring;
      std::size_t max = 100;
      std::uint64_t budget = 10000, seed = 0;
    };
    auto o = std::make_shared<Opts>();
    sub->add_option("--colouring", o->colouring, "colouring file")->required();
    sub->add_option("--max", o->max, "maximum number of gadgets");
    sub->add_option("--budget", o->budget, "copies probed");
    sub->add_option("--seed", o->seed, "random seed");
    sub->callback([this, sub, o, &code] {
      guarded(code, [&] {
        const Colouring chi = detail::load_colouring(o->colouring);
        const auto found = collect_gadgets(chi, o->max, o->budget, o->seed);
        json list = json::array();
        for (const auto& g : found) list.push_back(detail::gadget_json(g));
        json doc{{"n", chi.n()}, {"r", chi.r()}, {"found", found.size()}, {"gadgets", list}};
        finish_json(doc, *sub);
        return kExitOk;
      });
    });
  }

  void add_recover_structure(CLI::App& app, int& code) {
    auto* sub = app.add_subcommand("recover-structure", "recover the two-part split of a 2-colouring");
    struct Opts {
      std::string colouring;
      std::uint64_t seed = 0, sample_size = kExactParityPairs;
    };
    auto o = std::make_shared<Opts>();
    sub->add_option("--colouring", o->colouring, "colouring file (r = 2)")->required();
    sub->add_option("--seed", o->seed, "random seed for sampled parities");
    sub->add_option("--sample-size", o->sample_size, "pairs examined per parity decision");
    sub->callback([this, sub, o, &code] {
      guarded(code, [&] {
        const Colouring chi = detail::load_colouring(o->colouring);
        const auto rep = recover_partition(chi, o->seed, o->sample_size);
        json doc{{"n", chi.n()}};
        const json structure = detail::structure_json(rep);
        for (const auto& [k, v] : structure.items()) doc[k] = v;
        finish_json(doc, *sub);
        return kExitOk;
      });
    });
  }

  void add_decompose(CLI::App& app, int& code) {
    auto* sub = app.add_subcommand("decompose", "triangle-decompose a K3-divisible graph");
    struct Opts {
      std::string graph, output, order = "ascending";
      std::uint64_t budget = 100'000'000, seed = 0;
    };
    auto o = std::make_shared<Opts>();
    sub->add_option("--graph", o->graph, "edge list, or 'K <n> [minus-shadows <copies file>]'")->required();
    sub->add_option("--budget", o->budget, "search-tree node budget");
    sub->add_option("--order", o->order, "ascending | random")->check(CLI::IsMember({"ascending", "random"}));
    sub->add_option("--seed", o->seed, "seed for random value order");
    sub->add_option("--output", o->output, "output path (default stdout)");
    sub->callback([this, o, &code] {
      guarded(code, [&] {
        const SimpleGraph g = detail::load_graph(o->graph);
        DecomposeOptions opt;
        opt.budget = o->budget;
        opt.order = o->order == "random" ? ValueOrder::Random : ValueOrder::Ascending;
        opt.seed = o->seed;
        const auto res = triangle_decompose(g, opt);
        if (res.status == DecomposeStatus::Exhausted) {
          err_ << "error: search budget of " << o->budget << " nodes exhausted\n";
          return kExitExhausted;
        }
        if (res.status == DecomposeStatus::Infeasible) {
          err_ << "error: graph has no triangle decomposition (complete search, " << res.nodes << " nodes)\n";
          return kExitInvalid;
        }
        detail::emit(o->output, detail::system_text(TripleSystem(g.n(), res.triangles)), out_);
        err_ << "decomposed into " << res.triangles.size() << " triangles, " << res.nodes << " nodes\n";
        return kExitOk;
      });
    });
  }

  void add_boost(CLI::App& app, int& code) {
    auto* sub = app.add_subcommand("boost", "build a high-discrepancy STS from disjoint gadgets");
    struct Opts {
      std::string colouring, system_out, mode = "greedy";
      double p = 0.0;
      int cap = 0;
      std::size_t target = 0, collect_max = 2000;
      std::uint64_t collect_budget = 20000, budget = 100'000'000, seed = 0;
      bool no_colour_aware = false;
      int leave_variants = 4;
    };
    auto o = std::make_shared<Opts>();
    sub->add_option("--colouring", o->colouring, "colouring file")->required();
    sub->add_option("--seed", o->seed, "run seed");
    sub->add_option("--mode", o->mode, "greedy | sampled")->check(CLI::IsMember({"greedy", "sampled"}));
    sub->add_option("--p", o->p, "inclusion probability for sampled mode");
    sub->add_option("--cap", o->cap, "gadgets per vertex (0: ceil(n/28))");
    sub->add_option("--target", o->target, "maximum gadgets selected (0: no limit)");
    sub->add_option("--collect-max", o->collect_max, "gadgets gathered before selection");
    sub->add_option("--collect-budget", o->collect_budget, "copies probed while gathering");
    sub->add_option("--budget", o->budget, "search-tree nodes per leave decomposition");
    sub->add_option("--leave-variants", o->leave_variants, "shuffled colour-preferring decompositions per colour")
        ->check(CLI::NonNegativeNumber);
    sub->add_flag("--no-colour-aware", o->no_colour_aware, "only use the ascending leave decomposition");
    sub->add_option("--system-out", o->system_out, "write the final system here");
    sub->callback([this, sub, o, &code] {
      guarded(code, [&] {
        const Colouring chi = detail::load_colouring(o->colouring);
        BoostParams bp;
        bp.selection.mode = o->mode == "sampled" ? SelectionMode::Sampled : SelectionMode::Greedy;
        bp.selection.p = o->p;
        bp.selection.vertex_cap = o->cap;
        bp.selection.target_count = o->target;
        bp.collect_max = o->collect_max;
        bp.collect_budget = std::max<std::uint64_t>(o->collect_budget, o->collect_max);
        bp.decompose_budget = o->budget;
        bp.colour_aware = !o->no_colour_aware;
        bp.leave_variants = o->leave_variants;
        bp.seed = o->seed;
        const auto rep = boost(chi, bp);
        json doc{{"n", rep.n},
                 {"r", rep.r},
                 {"ok", rep.ok},
                 {"gadget_count_found", rep.gadgets_found},
                 {"selected", rep.selection.chosen.size()},
                 {"retried", rep.retried},
                 {"decomposition_nodes", detail::count(rep.decomposition_nodes)}};
        if (!rep.ok) {
          doc["failure"] = rep.failure;
          finish_json(doc, *sub);
          err_ << "error: " << rep.failure << '\n';
          return kExitExhausted;
        }
        json chosen = json::array();
        for (const auto& g : rep.selection.chosen) chosen.push_back(detail::copy_json(g.copy));
        doc["gadgets"] = chosen;
        doc["base_triangles"] = rep.base_triangles.size();
        doc["decomposition_order"] = rep.decomposition_order;
        doc["T_vector"] = detail::counts(rep.t_vector);
        doc["I_vector"] = detail::counts(rep.i_vector);
        doc["S_vector"] = detail::counts(rep.s_vector);
        doc["chosen_colour"] = rep.chosen_colour;
        doc["discrepancy"] = detail::rational(rep.discrepancy_achieved);
        if (!o->system_out.empty()) detail::emit(o->system_out, detail::system_text(rep.system), out_);
        finish_json(doc, *sub);
        return kExitOk;
      });
    });
  }

  void add_trade_search(CLI::App& app, int& code) {
    auto* sub = app.add_subcommand("trade-search", "hill-climb discrepancy by Pasch trades");
    struct Opts {
      std::string system, colouring, output;
      std::uint64_t iterations = 1000, seed = 0;
    };
    auto o = std::make_shared<Opts>();
    sub->add_option("--system", o->system, "starting STS file")->required();
    sub->add_option("--colouring", o->colouring, "colouring file")->required();
    sub->add_option("--iterations", o->iterations, "maximum trades");
    sub->add_option("--seed", o->seed, "scan-order seed");
    sub->add_option("--output", o->output, "write the final system here");
    sub->callback([this, sub, o, &code] {
      guarded(code, [&] {
        const TripleSystem s = detail::load_system(o->system);
        const Colouring chi = detail::load_colouring(o->colouring);
        const auto res = pasch_trade_search(s, chi, o->iterations, o->seed);
        if (!o->output.empty()) detail::emit(o->output, detail::system_text(res.system), out_);
        json doc{{"n", s.n()},
                 {"r", chi.r()},
                 {"trades", res.trades},
                 {"local_optimum", res.local_optimum},
                 {"initial_discrepancy", detail::rational(res.initial_discrepancy)},
                 {"final_discrepancy", detail::rational(res.final_discrepancy)},
                 {"counts", detail::counts(colour_profile(res.system, chi).counts)}};
        finish_json(doc, *sub);
        return kExitOk;
      });
    });
  }

  void add_baseline(CLI::App& app, int& code) {
    auto* sub = app.add_subcommand("baseline", "best of random relabellings of one STS");
    struct Opts {
      std::string colouring, system_out;
      std::uint64_t trials = 50, seed = 0;
    };
    auto o = std::make_shared<Opts>();
    sub->add_option("--colouring", o->colouring, "colouring file")->required();
    sub->add_option("--trials", o->trials, "random embeddings tried");
    sub->add_option("--seed", o->seed, "random seed");
    sub->add_option("--system-out", o->system_out, "write the best system here");
    sub->callback([this, sub, o, &code] {
      guarded(code, [&] {
        const Colouring chi = detail::load_colouring(o->colouring);
        const auto res = baseline_random_embedding(chi, o->trials, o->seed);
        if (!o->system_out.empty()) detail::emit(o->system_out, detail::system_text(res.best), out_);
        json doc{{"n", chi.n()},
                 {"r", chi.r()},
                 {"trials", res.trials},
                 {"counts", detail::counts(colour_profile(res.best, chi).counts)},
                 {"discrepancy", detail::rational(res.discrepancy_achieved)}};
        finish_json(doc, *sub);
        return kExitOk;
      });
    });
  }

  void add_enumerate(CLI::App& app, int& code) {
    auto* sub = app.add_subcommand("enumerate", "list every labelled STS of order 3, 7 or 9");
    auto n = std::make_shared<int>(7);
    auto count_only = std::make_shared<bool>(false);
    sub->add_option("--n", *n, "order (3, 7 or 9)");
    sub->add_flag("--count-only", *count_only, "print only the number of systems");
    sub->callback([this, n, count_only, &code] {
      guarded(code, [&] {
        if (*count_only) {
          out_ << count_all_sts(*n) << '\n';
          return kExitOk;
        }
        bool first = true;
        enumerate_all_sts(*n, [&](const TripleSystem& s) {
          if (!first) out_ << '\n';
          first = false;
          write_triple_system(out_, s);
        });
        return kExitOk;
      });
    });
  }

  void add_analyze(CLI::App& app, int& code) {
    auto* sub = app.add_subcommand("analyze", "gadget densities and structure of every colour merge (r >= 3)");
    struct Opts {
      std::string colouring;
      double gadget_threshold = 0.05, residual_threshold = 0.05;
      int cap = kDefaultExactCap;
      std::uint64_t samples = 200000, seed = 0;
    };
    auto o = std::make_shared<Opts>();
    sub->add_option("--colouring", o->colouring, "colouring file")->required();
    sub->add_option("--gadget-threshold", o->gadget_threshold, "density above which gadgets count as many");
    sub->add_option("--residual-threshold", o->residual_threshold, "allowed fraction outside the two top colours");
    sub->add_option("--cap", o->cap, "largest n for exact gadget counts");
    sub->add_option("--samples", o->samples, "random copies when sampling");
    sub->add_option("--seed", o->seed, "random seed");
    sub->callback([this, sub, o, &code] {
      guarded(code, [&] {
        const Colouring chi = detail::load_colouring(o->colouring);
        AnalyzeParams ap;
        ap.gadget_threshold = o->gadget_threshold;
        ap.residual_threshold = o->residual_threshold;
        ap.exact_cap = o->cap;
        ap.samples = o->samples;
        ap.seed = o->seed;
        ap.workers = global_.workers;
        const auto rep = analyze_r_colouring(chi, ap);
        json per = json::array();
        for (const auto& a : rep.per_colour) {
          json item{{"colour", a.colour}, {"exact", a.exact}, {"density", a.density}};
          if (a.exact)
            item["gadget_count"] = detail::count(a.gadget_count);
          else
            item["standard_error"] = a.standard_error;
          item["structure"] = detail::structure_json(a.structure);
          per.push_back(item);
        }
        json doc{{"n", chi.n()}, {"r", chi.r()}, {"per_colour", per}, {"verdict", to_string(rep.verdict)}};
        if (rep.verdict == Verdict::ManyGadgets) doc["gadget_colour"] = rep.gadget_colour;
        doc["c_star"] = rep.c_star;
        doc["d_star"] = rep.d_star;
        doc["residual_count"] = detail::count(rep.residual_count);
        finish_json(doc, *sub);
        return kExitOk;
      });
    });
  }

  void add_verify(CLI::App& app, int& code) {
    auto* sub = app.add_subcommand("verify", "validate a system file, optionally against a colouring");
    auto system = std::make_shared<std::string>();
    auto colouring = std::make_shared<std::string>();
    sub->add_option("--system", *system, "triple system file")->required();
    sub->add_option("--colouring", *colouring, "colouring file");
    sub->callback([this, sub, system, colouring, &code] {
      guarded(code, [&] {
        const TripleSystem s = detail::load_system(*system);
        const StsCheck check = validate_sts(s);
        json doc{{"n", s.n()}, {"triples", s.size()}, {"valid_sts", check.valid}};
        if (!check.valid) {
          doc["violation"] = {{"pair", {check.pair->first, check.pair->second}}, {"coverage", check.coverage}};
        }
        if (!colouring->empty()) {
          const Colouring chi = detail::load_colouring(*colouring);
          const ColourProfile p = colour_profile(s, chi);
          doc["counts"] = detail::counts(p.counts);
          if (!s.empty()) doc["discrepancy"] = detail::rational(discrepancy(p));
        }
        finish_json(doc, *sub);
        return check.valid ? kExitOk : kExitInvalid;
      });
    });
  }

  std::ostream& out_;
  std::ostream& err_;
  GlobalOptions global_;
  Clock::time_point t0_{};
};

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  return Runner(out, err).run(args);
}

}  // namespace stsd::cli
