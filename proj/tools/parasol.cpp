#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "parasol/cli.hpp"

namespace {

std::size_t parse_k(const std::string& s) {
  if (s == "unbounded" || s == "inf") return parasol::unbounded;
  std::size_t pos = 0;
  const unsigned long long v = std::stoull(s, &pos);
  if (pos != s.size() || v == 0) throw CLI::ValidationError("--k", "expected a positive integer or 'unbounded'");
  return static_cast<std::size_t>(v);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace parasol::cli;
  CLI::App app{"Streaming approximate-closed-itemset miner"};
  run_config c;
  std::string k = "unbounded";
  double epsilon = 0.0;

  const std::map<std::string, mode> modes{
      {"baseline", mode::baseline}, {"parasol", mode::parasol}, {"exact", mode::exact}};
  const std::map<std::string, backend> backends{{"flat", backend::flat}, {"wtree", backend::wtree}};
  const std::map<std::string, compression> compressions{
      {"off", compression::off}, {"flat", compression::flat}, {"two-step", compression::two_step}};

  app.add_option("--input", c.input, "FIMI transaction file ('-' for stdin)")->required();
  app.add_option("--mode", c.run_mode, "baseline | parasol | exact")
      ->transform(CLI::CheckedTransformer(modes, CLI::ignore_case));
  app.add_option("--k", k, "size constant, or 'unbounded'");
  app.add_option("--epsilon", epsilon, "error parameter for parasol mode, in [0, 1)");
  app.add_option("--sigma", c.sigma, "query threshold, in [0, 1]");
  app.add_option("--backend", c.index, "flat | wtree")
      ->transform(CLI::CheckedTransformer(backends, CLI::ignore_case));
  app.add_option("--compress", c.compress, "off | flat | two-step")
      ->transform(CLI::CheckedTransformer(compressions, CLI::ignore_case));
  app.add_option("--metrics", c.metrics_path, "metrics CSV output path");
  app.add_option("--out", c.out_path, "result output path ('-' for stdout)");
  app.add_option("--stride", c.stride, "metrics sampling stride");
  app.add_flag("--summary-json", c.summary_json, "print the summary as JSON");

  try {
    app.parse(argc, argv);
    c.k = parse_k(k);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return usage;
  } catch (const std::exception& e) {
    std::cerr << "error: --k: " << e.what() << '\n';
    return usage;
  }
  if (app.count("--epsilon")) c.epsilon = epsilon;
  return run(c, std::cout, std::cerr);
}
