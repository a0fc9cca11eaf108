// gradval command-line front end.
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gradval/error.hpp"
#include "gradval/scenario.hpp"
#include "gradval/value.hpp"

namespace fs = std::filesystem;
using namespace gradval;

namespace {

constexpr int kCheckFailure = 2;
constexpr int kLoadError = 3;

fs::path default_corpus() {
  if (const char* env = std::getenv("GRADVAL_CORPUS")) return env;
#ifdef GRADVAL_CORPUS_DIR
  return GRADVAL_CORPUS_DIR;
#else
  return "corpus";
#endif
}

bool slow_from_env() {
  const char* env = std::getenv("GRADVAL_SLOW");
  return env && std::string(env) == "1";
}

void emit(const std::vector<Report>& reports, const std::string& format) {
  if (format == "json") {
    if (reports.size() == 1) {
      std::cout << reports.front().to_json().dump(2) << "\n";
    } else {
      nlohmann::json all = nlohmann::json::array();
      for (const auto& r : reports) all.push_back(r.to_json());
      std::cout << all.dump(2) << "\n";
    }
    return;
  }
  for (const auto& r : reports) std::cout << r.to_text();
}

int exit_for(const std::vector<Report>& reports) {
  for (const auto& r : reports) {
    if (!r.passed()) return kCheckFailure;
  }
  return 0;
}

std::vector<std::string> split_ids(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    if (ch == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

void print_gamma(const CanonicalValuation& v) {
  const Groupoid& g = v.parent()->groupoid();
  std::cout << "Omega orbits:\n";
  for (const auto& o : v.orbits()) {
    std::cout << "  " << g.name(o.rep) << "  loop " << o.loop << "  degrees";
    for (Index x : o.degrees) std::cout << " " << g.name(x) << "(shift " << v.shift(x) << ")";
    std::cout << "\n";
  }
  std::cout << "G-bar classes:\n";
  for (std::size_t c = 0; c < v.gbar_classes().size(); ++c) {
    std::cout << "  [" << v.gbar_name(c) << "] =";
    for (Index x : v.gbar_classes()[c]) std::cout << " " << g.name(x);
    std::cout << "\n";
  }
  std::cout << "G-bar order:\n";
  bool any = false;
  for (std::size_t a = 0; a < v.gbar_classes().size(); ++a) {
    for (std::size_t b = 0; b < v.gbar_classes().size(); ++b) {
      if (v.gbar_lt(a, b)) {
        std::cout << "  [" << v.gbar_name(a) << "] < [" << v.gbar_name(b) << "]\n";
        any = true;
      }
    }
  }
  if (!any) std::cout << "  (discrete)\n";
  std::cout << "Gamma idempotents:\n";
  for (const auto& e : v.gamma_idempotents()) std::cout << "  " << v.render(e) << "\n";
  std::cout << "Gamma is " << (v.gamma_idempotents().size() == 1 ? "a group" : "not a group") << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gradval: groupoid-graded skewfields, G-valuation rings and their valuations"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  RunOptions options;
  std::string format = "text";
  std::string only;
  std::string corpus;
  std::vector<std::string> files;
  std::string scenario_file;
  std::string name;
  std::string expr;

  auto add_run_flags = [&](CLI::App* cmd) {
    cmd->add_option("--seed", options.seed, "random seed")->capture_default_str();
    cmd->add_option("--window", options.window, "value window [-w, w] for exhaustive scans")
        ->check(CLI::Range(0, 40))
        ->capture_default_str();
    cmd->add_option("--report", format, "report format")->check(CLI::IsMember({"json", "text"}))->capture_default_str();
    cmd->add_flag("--slow", options.slow, "larger random samples (also GRADVAL_SLOW=1)");
    cmd->add_flag("--timing", options.timing, "include per-check timings (reports stop being byte-stable)");
  };

  CLI::App* check = app.add_subcommand("check", "run checks on scenario files");
  check->add_option("scenario", files, "scenario files")->required();
  check->add_option("--only", only, "comma-separated check ids");
  add_run_flags(check);

  CLI::App* repro = app.add_subcommand("reproduce", "reproduce a worked example from the corpus");
  repro->add_option("name", name, "example name (see list)")->required();
  repro->add_option("--corpus", corpus, "corpus directory");
  add_run_flags(repro);

  CLI::App* eval = app.add_subcommand("eval", "print v(x) for an element of a scenario");
  eval->add_option("scenario", scenario_file, "scenario file")->required();
  eval->add_option("element", expr, "element, e.g. \"25*e11 + 1/5*e12\"")->required();

  CLI::App* gamma = app.add_subcommand("gamma", "print Omega, G-bar and Gamma summaries");
  gamma->add_option("scenario", scenario_file, "scenario file")->required();

  CLI::App* list = app.add_subcommand("list", "list reproducible examples and available checks");
  list->add_option("--corpus", corpus, "corpus directory");

  CLI11_PARSE(app, argc, argv);
  options.slow = options.slow || slow_from_env();
  const fs::path corpus_dir = corpus.empty() ? default_corpus() : fs::path(corpus);

  try {
    if (*list) {
      std::cout << "examples:\n";
      for (const auto& n : reproducible_examples()) {
        const fs::path p = corpus_dir / (n + ".toml");
        std::cout << "  " << n;
        if (fs::exists(p)) {
          Scenario s = load_scenario(p);
          if (!s.anchor.empty()) std::cout << "  (" << s.anchor << ")";
        } else {
          std::cout << "  (missing " << p.string() << ")";
        }
        std::cout << "\n";
      }
      std::cout << "checks:\n";
      for (const auto& id : all_checks()) std::cout << "  " << id << "\n";
      return 0;
    }

    if (*repro) {
      std::vector<Report> reports{reproduce(name, corpus_dir, options)};
      emit(reports, format);
      return exit_for(reports);
    }

    if (*check) {
      options.only = split_ids(only);
      for (const auto& id : options.only) {
        const auto& all = all_checks();
        if (std::find(all.begin(), all.end(), id) == all.end()) {
          std::cerr << "unknown check '" << id << "'\n";
          return kLoadError;
        }
      }
      std::vector<Scenario> scenarios;
      for (const auto& f : files) scenarios.push_back(load_scenario(f));
      std::vector<Report> reports;
      for (const auto& s : scenarios) reports.push_back(run_checks(s, options));
      emit(reports, format);
      return exit_for(reports);
    }

    Scenario s = load_scenario(scenario_file);
    if (!s.subring) {
      std::cerr << s.id << ": scenario has no subring\n";
      return kCheckFailure;
    }
    CanonicalValuation v(*s.subring);
    if (*eval) {
      GradedElement x = [&] {
        try {
          return GradedElement::parse(s.q, expr);
        } catch (const Error& e) {
          std::cerr << e.what() << "\n";
          std::exit(kLoadError);
        }
      }();
      std::cout << v.render(v.value(x)) << "\n";
      return 0;
    }
    print_gamma(v);
    return 0;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::ParseError:
      case ErrorCode::ValidationError:
      case ErrorCode::InvalidTwist:
      case ErrorCode::UnknownElement:
      case ErrorCode::UnknownExample:
      case ErrorCode::InvalidDescriptor:
        return kLoadError;
      default:
        return kCheckFailure;
    }
  }
}
