// Command-line front end. Talks to the library exclusively through the C
// interface in coopifc.h.
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "coopifc.h"

namespace {

struct StringDeleter {
  void operator()(char* s) const { coopifc_string_free(s); }
};
using CStr = std::unique_ptr<char, StringDeleter>;

struct ChannelDeleter {
  void operator()(coopifc_channel* c) const { coopifc_channel_free(c); }
};
using Channel = std::unique_ptr<coopifc_channel, ChannelDeleter>;

int fail(int code, char* err) {
  CStr owned(err);
  std::fprintf(stderr, "error: %s\n", owned ? owned.get() : "unknown");
  return code ? code : COOPIFC_EINVAL;
}

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream os;
  os << in.rdbuf();
  out = os.str();
  return true;
}

int emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::fputs(text.c_str(), stdout);
    return 0;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::fprintf(stderr, "error: cannot write %s\n", out_path.c_str());
    return COOPIFC_EINVAL;
  }
  out << text;
  return 0;
}

// Builds a channel handle from --channel or --sym [--mode].
int open_channel(const std::string& channel_path, const std::string& sym_path,
                 const std::string& mode, Channel& out) {
  std::string text;
  coopifc_channel* raw = nullptr;
  char* err = nullptr;
  if (!channel_path.empty()) {
    if (!read_file(channel_path, text)) {
      std::fprintf(stderr, "error: cannot read %s\n", channel_path.c_str());
      return COOPIFC_EINVAL;
    }
    int rc = coopifc_channel_parse(text.c_str(), &raw, &err);
    if (rc != COOPIFC_OK) return fail(rc, err);
  } else if (!sym_path.empty()) {
    if (!read_file(sym_path, text)) {
      std::fprintf(stderr, "error: cannot read %s\n", sym_path.c_str());
      return COOPIFC_EINVAL;
    }
    int rc = coopifc_channel_from_symmetric(
        text.c_str(), mode.empty() ? nullptr : mode.c_str(), &raw, &err);
    if (rc != COOPIFC_OK) return fail(rc, err);
  } else {
    std::fprintf(stderr, "error: one of --channel or --sym is required\n");
    return COOPIFC_EINVAL;
  }
  out.reset(raw);
  return 0;
}

std::string optimizer_json(int restarts, unsigned long long seed) {
  std::ostringstream os;
  os << "{\"restarts\": " << restarts << ", \"seed\": " << seed << "}";
  return os.str();
}

bool parse_grid(const std::string& spec, double& a, double& b, double& step) {
  char trailing;
  return std::sscanf(spec.c_str(), "%lf:%lf:%lf%c", &a, &b, &step,
                     &trailing) == 3;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::istringstream is(s);
  std::string tok;
  while (std::getline(is, tok, ',')) out.push_back(std::stoi(tok));
  return out;
}

const char* kFigModes[] = {"no-coop",         "in-band-source",
                           "out-of-band-source", "output-feedback",
                           "rate-limited-feedback", "ultimate"};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Outer bounds for the two-user cooperative Gaussian "
               "interference channel"};
  app.require_subcommand(1);

  std::string channel_path, sym_path, mode, bounds = "all", grid_spec;
  std::string out_path, format = "csv", subset_spec, order_spec;
  double beta = 0.0;
  int restarts = 32, which = 2, K = 2;
  unsigned long long seed = 0;
  bool condition_dest = false;

  auto* eval = app.add_subcommand("eval-bounds",
                                  "Maximize the outer bounds on a channel");
  eval->add_option("--channel", channel_path, "Channel JSON file");
  eval->add_option("--sym", sym_path, "Symmetric spec JSON file");
  eval->add_option("--mode", mode, "Cooperation mode preset (with --sym)");
  eval->add_option("--bounds", bounds, "Comma list of bound names, or 'all'");
  eval->add_option("--restarts", restarts, "Optimizer restarts");
  eval->add_option("--seed", seed, "Random seed");
  eval->add_option("--out", out_path, "Output path (default stdout)");

  auto* sweep = app.add_subcommand("gdof-sweep",
                                   "Closed-form GDoF curve of one mode");
  sweep->add_option("--mode", mode, "Cooperation mode")->required();
  sweep->add_option("--beta", beta, "Cooperation strength");
  sweep->add_option("--grid", grid_spec, "Alpha grid A:B:STEP")->required();
  sweep->add_option("--format", format, "csv, json or svg")
      ->check(CLI::IsMember({"csv", "json", "svg"}));
  sweep->add_option("--out", out_path, "Output path (default stdout)");

  auto* fig = app.add_subcommand("reproduce-fig",
                                 "GDoF curves of all modes, CSV + SVG");
  fig->add_option("--which", which, "Figure number")
      ->required()
      ->check(CLI::IsMember({2, 3}));
  fig->add_option("--out", out_path, "Output directory (default '.')");

  auto* kgen = app.add_subcommand("ksum-gen",
                                  "Generate a partial-sum-rate bound chain");
  kgen->add_option("--K", K, "Number of user pairs")->required();
  kgen->add_option("--subset", subset_spec, "Users, comma list")->required();
  kgen->add_option("--order", order_spec, "Evaluation order, comma list");
  kgen->add_flag("--condition-dest", condition_dest,
                 "Condition every term on destination inputs");
  kgen->add_option("--out", out_path, "Output path (default stdout)");

  auto* keval = app.add_subcommand("ksum-eval",
                                   "Evaluate a chain on a channel instance");
  keval->add_option("--channel", channel_path, "Channel JSON file")
      ->required();
  keval->add_option("--subset", subset_spec, "Users, comma list")->required();
  keval->add_option("--order", order_spec, "Evaluation order, comma list");
  keval->add_flag("--condition-dest", condition_dest,
                  "Condition every term on destination inputs");
  keval->add_option("--out", out_path, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return COOPIFC_EINVAL;
  }

  char* err = nullptr;

  if (*eval) {
    Channel ch;
    if (int rc = open_channel(channel_path, sym_path, mode, ch)) return rc;
    std::string opt = optimizer_json(restarts, seed);
    char* out = nullptr;
    int rc = coopifc_eval_bounds(ch.get(), bounds.c_str(), opt.c_str(), &out,
                                 &err);
    if (rc != COOPIFC_OK) return fail(rc, err);
    CStr owned(out);
    return emit(std::string(owned.get()) + "\n", out_path);
  }

  if (*sweep) {
    double a, b, step;
    if (!parse_grid(grid_spec, a, b, step)) {
      std::fprintf(stderr, "error: bad --grid, expected A:B:STEP\n");
      return COOPIFC_EINVAL;
    }
    char* csv = nullptr;
    int rc = coopifc_gdof_sweep(mode.c_str(), beta, a, b, step, &csv, &err);
    if (rc != COOPIFC_OK) return fail(rc, err);
    CStr owned_csv(csv);
    if (format == "csv") return emit(owned_csv.get(), out_path);
    char* converted = nullptr;
    if (format == "json") {
      rc = coopifc_curve_csv_to_json(owned_csv.get(), &converted, &err);
    } else {
      const char* one[] = {owned_csv.get()};
      rc = coopifc_curves_to_svg(one, 1, &converted, &err);
    }
    if (rc != COOPIFC_OK) return fail(rc, err);
    CStr owned(converted);
    return emit(owned.get(), out_path);
  }

  if (*fig) {
    const double fig_beta = which == 2 ? 0.125 : 2.5;
    std::string dir = out_path.empty() ? "." : out_path;
    std::vector<CStr> csvs;
    std::vector<const char*> raw;
    for (const char* m : kFigModes) {
      char* csv = nullptr;
      int rc = coopifc_gdof_sweep(m, fig_beta, 0.0, 3.0, 0.005, &csv, &err);
      if (rc != COOPIFC_OK) return fail(rc, err);
      csvs.emplace_back(csv);
      raw.push_back(csv);
      std::string path =
          dir + "/fig" + std::to_string(which) + "-" + m + ".csv";
      if (int erc = emit(csv, path)) return erc;
    }
    char* svg = nullptr;
    int rc = coopifc_curves_to_svg(raw.data(), static_cast<int>(raw.size()),
                                   &svg, &err);
    if (rc != COOPIFC_OK) return fail(rc, err);
    CStr owned(svg);
    return emit(owned.get(), dir + "/fig" + std::to_string(which) + ".svg");
  }

  if (*kgen || *keval) {
    std::vector<int> users;
    try {
      users = parse_int_list(order_spec.empty() ? subset_spec : order_spec);
    } catch (const std::exception&) {
      std::fprintf(stderr, "error: bad user list\n");
      return COOPIFC_EINVAL;
    }
    char* out = nullptr;
    int rc;
    if (*kgen) {
      rc = coopifc_ksum_terms(K, users.data(), static_cast<int>(users.size()),
                              condition_dest ? 1 : 0, &out, &err);
    } else {
      Channel ch;
      if (int orc = open_channel(channel_path, "", "", ch)) return orc;
      rc = coopifc_ksum_eval(ch.get(), users.data(),
                             static_cast<int>(users.size()),
                             condition_dest ? 1 : 0, &out, &err);
    }
    if (rc != COOPIFC_OK) return fail(rc, err);
    CStr owned(out);
    std::string text = owned.get();
    if (!text.empty() && text.back() != '\n') text += '\n';
    return emit(text, out_path);
  }

  return 0;
}
