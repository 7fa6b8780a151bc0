#include <iostream>
#include <random>

#include <CLI11.hpp>

#include "parasol/fimi.hpp"
#include "parasol/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Seeded FIMI stream generator"};
  std::string kind = "drift";
  parasol::drift_config d;
  parasol::item universe = 7;
  std::size_t max_length = 7;

  app.add_option("--kind", kind, "drift | uniform")->check(CLI::IsMember({"drift", "uniform"}));
  app.add_option("--seed", d.seed, "RNG seed");
  app.add_option("--n", d.n, "number of transactions");
  app.add_option("--burst-begin", d.burst_begin, "drift: first burst transaction (0-based)");
  app.add_option("--burst-length", d.burst_length, "drift: burst length in transactions");
  app.add_option("--burst-vocabulary", d.burst_vocabulary, "drift: distinct burst items");
  app.add_option("--burst-transaction-length", d.burst_transaction_length,
                 "drift: items per burst transaction");
  app.add_option("--patterns", d.patterns, "drift: number of stable patterns");
  app.add_option("--noise", d.noise_items, "drift: random extra items per stable transaction");
  app.add_option("--universe", universe, "uniform: items are 1..universe");
  app.add_option("--max-length", max_length, "uniform: maximum transaction length");
  CLI11_PARSE(app, argc, argv);

  std::vector<parasol::itemset> ts;
  if (kind == "drift") {
    ts = parasol::generate_drift(d);
  } else {
    std::mt19937_64 rng(d.seed);
    ts = parasol::generate_uniform(rng, d.n, universe, max_length);
  }
  for (const auto& t : ts) std::cout << parasol::to_string(t) << '\n';
  return std::cout ? 0 : 3;
}
