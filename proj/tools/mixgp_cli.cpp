#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mixgp/mixgp.hpp"

namespace {

using namespace mixgp;

enum Exit : int {
  kOk = 0,
  kParse = 2,
  kGeneration = 3,
  kNumerical = 4,
  kValidation = 5,
  kStrict = 6,
};

constexpr const char* kEnvHelp =
    "Environment:\n"
    "  MIXGP_SEED    default for --seed (0 when unset)\n"
    "  MIXGP_JITTER  initial diagonal jitter for fit (1e-10 when unset)\n"
    "\n"
    "Exit codes: 2 parse error, 3 design generation error, 4 numerical failure,\n"
    "5 validation error, 6 benchmark fit failure under --strict.";

std::uint64_t default_seed() {
  const char* s = std::getenv("MIXGP_SEED");
  if (s == nullptr || *s == '\0') return 0;
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw ParseError(std::string("MIXGP_SEED is not an unsigned integer: ") + s);
  }
}

double default_jitter() {
  const char* s = std::getenv("MIXGP_JITTER");
  if (s == nullptr || *s == '\0') return 1e-10;
  const double v = io::parse_double(s, "MIXGP_JITTER");
  if (!(v > 0.0)) throw ParseError("MIXGP_JITTER must be positive");
  return v;
}

/// Writes to `path`, or to stdout when the path is empty or "-".
void emit(const std::string& path, const std::function<void(std::ostream&)>& body) {
  if (path.empty() || path == "-") {
    body(std::cout);
    std::cout.flush();
    return;
  }
  std::ostringstream buf;
  body(buf);
  io::write_text(path, buf.str());
}

struct DoeArgs {
  std::string space;
  int n = 0;
  std::optional<std::uint64_t> seed;
  std::string method = "lhs";
  std::vector<int> counts;
  std::string out;
};

int cmd_doe(const DoeArgs& a) {
  DesignSpace space = [&] {
    try {
      return io::read_design_space(a.space);
    } catch (const Error& e) {
      std::cerr << "error: " << e.what() << '\n';
      throw Exit{kParse};
    }
  }();
  std::vector<MixedPoint> points;
  try {
    if (a.method == "lhs") {
      points = lhs(space, a.n, a.seed.value_or(default_seed()));
    } else {
      const std::vector<int> counts = a.counts.empty() ? std::vector<int>{a.n} : a.counts;
      points = grid(space, counts);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kGeneration;
  }
  emit(a.out, [&](std::ostream& os) { io::write_points(os, space, points); });
  std::cerr << points.size() << " points\n";
  return kOk;
}

struct FitArgs {
  std::string space;
  std::string data;
  std::string kernel = "ehh";
  int p = 2;
  int starts = 10;
  std::optional<std::uint64_t> seed;
  std::string out_model;
  std::string trace;
};

int cmd_fit(const FitArgs& a) {
  CategoricalKernelKind kind{};
  ExponentPower p{};
  std::optional<Dataset> data;
  try {
    kind = parse_kernel_kind(a.kernel);
    p = exponent_from_int(a.p);
    const DesignSpace space = io::read_design_space(a.space);
    data.emplace(io::read_dataset(a.data, space));
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kParse;
  }

  FitConfig cfg;
  cfg.n_starts = a.starts;
  cfg.seed = a.seed.value_or(default_seed());
  cfg.jitter = default_jitter();
  const auto t0 = std::chrono::steady_clock::now();
  std::optional<GpModel> model;
  try {
    model.emplace(fit(*data, kind, p, cfg));
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kParse;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (!a.out_model.empty()) io::write_model(a.out_model, *model);
  if (!a.trace.empty()) {
    MultistartResult r;
    r.starts = model->search_log();
    emit(a.trace, [&](std::ostream& os) { write_trace(os, r); });
  }
  std::cout << "kernel=" << to_string(kind) << " n_hyper=" << model->hyperparameters().size()
            << " log_likelihood=" << io::format_double(model->log_likelihood()) << " time=" << seconds << "s\n";
  return kOk;
}

struct PredictArgs {
  std::string model;
  std::string points;
  std::string out;
};

int cmd_predict(const PredictArgs& a) {
  std::optional<GpModel> model;
  try {
    model.emplace(io::read_model(a.model));
  } catch (const NumericalFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kParse;
  }
  std::vector<MixedPoint> points;
  try {
    points = io::read_points(a.points, model->space());
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kParse;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  }
  emit(a.out, [&](std::ostream& os) {
    auto h = io::header(model->space());
    h.push_back("mean");
    h.push_back("std");
    os << io::join(h) << '\n';
    for (const auto& w : points) {
      const auto [m, v] = model->predict(w);
      auto cells = io::point_cells(model->space(), w);
      cells.push_back(io::format_double(m));
      cells.push_back(io::format_double(std::sqrt(v)));
      os << io::join(cells) << '\n';
    }
  });
  return kOk;
}

struct BenchmarkArgs {
  std::string problem;
  std::vector<std::string> kernels{"gd", "cr", "ehh"};
  int doe_size = 98;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool strict = false;
};

int cmd_benchmark(const BenchmarkArgs& a) {
  if (a.problem == "dragon-audit") {
    const auto audit = bench::dragon_space_audit();
    emit(a.out, [&](std::ostream& os) { os << audit.summary() << '\n'; });
    if (!a.out.empty() && a.out != "-") std::cout << audit.summary() << '\n';
    return kOk;
  }
  std::vector<CategoricalKernelKind> kinds;
  try {
    for (const auto& k : a.kernels) kinds.push_back(parse_kernel_kind(k));
    if (a.doe_size < 2) throw InvalidArgument("--doe-size must be >= 2");
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kParse;
  }
  bench::BenchmarkOptions options;
  options.fit.jitter = default_jitter();
  const std::uint64_t seed = a.seed.value_or(default_seed());
  const auto run = a.problem == "cosine" ? bench::run_cosine_benchmark(kinds, a.doe_size, seed, options)
                                         : bench::run_cantilever_benchmark(kinds, a.doe_size, seed, {}, options);
  emit(a.out, [&](std::ostream& os) { bench::write_report(os, run); });
  bool failed = false;
  for (const auto& r : run.results) {
    if (!r.ok()) {
      failed = true;
      std::cerr << "fit failed for " << to_string(r.kind) << ": " << r.error << '\n';
    }
  }
  return failed && a.strict ? kStrict : kOk;
}

struct KernelInfoArgs {
  std::string space;
};

int cmd_kernel_info(const KernelInfoArgs& a) {
  DesignSpace space = [&] {
    try {
      return io::read_design_space(a.space);
    } catch (const Error& e) {
      std::cerr << "error: " << e.what() << '\n';
      throw Exit{kParse};
    }
  }();
  std::cout << "variables=" << space.size() << " continuous=" << space.n_continuous()
            << " integer=" << space.n_integer() << " categorical=" << space.n_categorical()
            << " relaxed=" << space.relaxed_dim() << '\n';
  std::cout << "kernel,n_hyper\n";
  for (auto kind : kAllKinds) std::cout << to_string(kind) << ',' << hyperparameter_count(space, kind) << '\n';
  return kOk;
}

struct ExportArgs {
  std::string model;
  int variable = 0;
  std::string out;
};

int cmd_export_corr(const ExportArgs& a) {
  std::optional<GpModel> model;
  try {
    model.emplace(io::read_model(a.model));
  } catch (const NumericalFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kParse;
  }
  const DesignSpace& space = model->space();
  if (a.variable < 0 || static_cast<std::size_t>(a.variable) >= space.size() ||
      space.slot(static_cast<std::size_t>(a.variable)).kind != VariableKind::Categorical) {
    std::cerr << "error: variable " << a.variable << " is not categorical\n";
    return kValidation;
  }
  const auto pos = space.slot(static_cast<std::size_t>(a.variable)).position;
  const auto& cat = space.variables()[static_cast<std::size_t>(a.variable)].as_categorical();
  emit(a.out, [&](std::ostream& os) { io::write_level_matrix(os, cat, model->kernel().level_matrices()[pos]); });
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian-process surrogates over mixed continuous, integer and categorical inputs."};
  app.footer(kEnvHelp);
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", "mixgp 0.1.0");

  const std::vector<std::string> kernel_names{"gd", "cr", "ehh", "fe", "hh"};
  auto kernel_check = CLI::IsMember(kernel_names, CLI::ignore_case);

  DoeArgs doe;
  auto* doe_cmd = app.add_subcommand("doe", "Generate a design of experiments over a design space");
  doe_cmd->add_option("space", doe.space, "Design space JSON file")->required();
  doe_cmd->add_option("--n", doe.n, "Number of LHS points (grid: count per numeric variable)");
  doe_cmd->add_option("--seed", doe.seed, "Random seed");
  doe_cmd->add_option("--method", doe.method, "lhs or grid")
      ->check(CLI::IsMember({"lhs", "grid"}))
      ->capture_default_str();
  doe_cmd->add_option("--counts", doe.counts, "Grid points per continuous/integer variable")->delimiter(',');
  doe_cmd->add_option("--out", doe.out, "Output points file (stdout when omitted)");

  FitArgs fa;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a GP by maximum likelihood");
  fit_cmd->add_option("space", fa.space, "Design space JSON file")->required();
  fit_cmd->add_option("data", fa.data, "Dataset file with a target column")->required();
  fit_cmd->add_option("--kernel", fa.kernel, "Categorical kernel")->check(kernel_check)->capture_default_str();
  fit_cmd->add_option("--p", fa.p, "Exponent for continuous/integer distances (1 or 2)")
      ->check(CLI::IsMember({1, 2}))
      ->capture_default_str();
  fit_cmd->add_option("--starts", fa.starts, "Number of multistart searches")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  fit_cmd->add_option("--seed", fa.seed, "Random seed");
  fit_cmd->add_option("--out-model", fa.out_model, "Write the fitted model as JSON");
  fit_cmd->add_option("--trace", fa.trace, "Write the per-start search log");

  PredictArgs pa;
  auto* predict_cmd = app.add_subcommand("predict", "Predict mean and standard deviation at points");
  predict_cmd->add_option("model", pa.model, "Model JSON file")->required();
  predict_cmd->add_option("points", pa.points, "Points file")->required();
  predict_cmd->add_option("--out", pa.out, "Output file (stdout when omitted)");

  BenchmarkArgs ba;
  auto* bench_cmd = app.add_subcommand("benchmark", "Run a benchmark problem");
  bench_cmd->add_option("--problem", ba.problem, "cosine, beam or dragon-audit")
      ->required()
      ->check(CLI::IsMember({"cosine", "beam", "dragon-audit"}));
  bench_cmd->add_option("--kernels", ba.kernels, "Comma-separated kernels")
      ->delimiter(',')
      ->check(kernel_check)
      ->capture_default_str();
  bench_cmd->add_option("--doe-size", ba.doe_size, "Training LHS size")->capture_default_str();
  bench_cmd->add_option("--seed", ba.seed, "Random seed");
  bench_cmd->add_option("--out", ba.out, "Report file (stdout when omitted)");
  bench_cmd->add_flag("--strict", ba.strict, "Exit 6 when any fit fails");

  KernelInfoArgs ka;
  auto* info_cmd = app.add_subcommand("kernel-info", "Hyperparameter counts per kernel for a design space");
  info_cmd->add_option("space", ka.space, "Design space JSON file")->required();

  ExportArgs ea;
  auto* export_cmd = app.add_subcommand("export-corr", "Export a fitted categorical correlation matrix");
  export_cmd->add_option("model", ea.model, "Model JSON file")->required();
  export_cmd->add_option("--variable", ea.variable, "Design-space index of a categorical variable")->required();
  export_cmd->add_option("--out", ea.out, "Output file (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kParse;
  }

  try {
    if (*doe_cmd) return cmd_doe(doe);
    if (*fit_cmd) return cmd_fit(fa);
    if (*predict_cmd) return cmd_predict(pa);
    if (*bench_cmd) return cmd_benchmark(ba);
    if (*info_cmd) return cmd_kernel_info(ka);
    if (*export_cmd) return cmd_export_corr(ea);
  } catch (Exit code) {
    return code;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kParse;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  }
  return kParse;
}
