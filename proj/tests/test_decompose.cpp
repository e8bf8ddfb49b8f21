#include <doctest.h>

#include <vector>

#include "occ/decompose.hpp"
#include "occ/law.hpp"
#include "occ/stream.hpp"

using namespace occ;

TEST_CASE("three-step example splits as defined") {
  std::vector<Symbol> path = {Symbol::fresh(0), Symbol::atom(2), Symbol::fresh(1)};
  auto view = decompose(path);
  CHECK(view.diffuse_indicator == std::vector<std::uint8_t>{1, 0, 1});
  CHECK(view.atom_positions == std::vector<std::uint64_t>{2});
  CHECK(view.diffuse_positions == std::vector<std::uint64_t>{1, 3});
  CHECK(view.atom_subsequence == std::vector<Symbol>{Symbol::atom(2)});
  CHECK(view.diffuse_subsequence ==
        std::vector<Symbol>{Symbol::fresh(0), Symbol::fresh(1)});
  CHECK(view.diffuse_running == std::vector<std::uint64_t>{1, 1, 2});
}

TEST_CASE("all-atom path has an empty diffuse side") {
  std::vector<Symbol> path;
  for (int i = 0; i < 5; ++i) path.push_back(Symbol::atom(i % 2));
  auto view = decompose(path);
  CHECK(view.diffuse_positions.empty());
  CHECK(view.atom_positions == std::vector<std::uint64_t>{1, 2, 3, 4, 5});
  CHECK(view.diffuse_running.back() == 0);
}

TEST_CASE("running diffuse count matches a hand count") {
  std::vector<Symbol> path = {Symbol::atom(0), Symbol::fresh(0), Symbol::atom(1),
                              Symbol::fresh(1), Symbol::fresh(2)};
  auto view = decompose(path);
  CHECK(view.diffuse_running == std::vector<std::uint64_t>{0, 1, 1, 2, 3});
}

TEST_CASE("positions partition the index range") {
  SymbolStream s(RegularLaw::mixed(0.4, RegularLaw::geometric(0.5)), 99);
  auto path = s.sample(777);
  auto view = decompose(path);
  CHECK(view.atom_positions.size() + view.diffuse_positions.size() == path.size());
  std::vector<bool> seen(path.size() + 1, false);
  for (auto p : view.atom_positions) seen[p] = true;
  for (auto p : view.diffuse_positions) {
    CHECK(!seen[p]);
    seen[p] = true;
  }
  for (std::size_t i = 1; i <= path.size(); ++i) CHECK(seen[i]);
  for (Symbol x : view.atom_subsequence) CHECK(x.is_atom());
  for (Symbol y : view.diffuse_subsequence) CHECK(y.is_fresh());
}

TEST_CASE("interleave rebuilds the path exactly") {
  SymbolStream s(RegularLaw::mixed(0.6, RegularLaw::zipf_like(0.5)), 5);
  for (int rep = 0; rep < 10; ++rep) {
    auto path = s.sample(500);
    CHECK(interleave(decompose(path)) == path);
  }
}

TEST_CASE("identities hold on pure-atom and pure-fresh paths") {
  std::vector<Symbol> atoms;
  for (int i = 0; i < 300; ++i) atoms.push_back(Symbol::atom(i % 7));
  CHECK(verify_identities(atoms, 5).pass);

  std::vector<Symbol> fresh;
  for (int i = 0; i < 300; ++i) fresh.push_back(Symbol::fresh(i));
  auto report = verify_identities(fresh, 5);
  CHECK(report.pass);
  CHECK(report.prefixes_checked == 300);
}

TEST_CASE("identities hold on random mixed paths at every prefix") {
  auto law = RegularLaw::mixed(0.7, RegularLaw::zipf_like(0.5));
  for (int rep = 0; rep < 50; ++rep) {
    SymbolStream s(law, seed_split(808, rep));
    auto path = s.sample(1000);
    auto report = verify_identities(path, 10);
    CHECK(report.pass);
    CHECK(report.first_bad_prefix == 0);
    CHECK(report.prefixes_checked == 1000);
  }
}

TEST_CASE("identity checker detects a corrupted path") {
  // a repeated fresh id breaks the almost-sure disjointness the proof uses
  std::vector<Symbol> bad = {Symbol::fresh(0), Symbol::fresh(0)};
  auto report = verify_identities(bad, 2);
  CHECK_FALSE(report.pass);
  CHECK(report.first_bad_prefix == 2);
  CHECK(!report.detail.empty());
}

TEST_CASE("verify_identities rejects max_k below 2") {
  std::vector<Symbol> path = {Symbol::atom(0)};
  CHECK_THROWS_AS(verify_identities(path, 1), std::invalid_argument);
}

TEST_CASE("diffuse frequency law of large numbers") {
  std::vector<Symbol> atoms(100, Symbol::atom(1));
  auto exact0 = bernoulli_lln_check(atoms, 0.0);
  CHECK(exact0.observed == 0.0);
  CHECK(exact0.gap == 0.0);
  CHECK(exact0.pass);

  std::vector<Symbol> fresh;
  for (int i = 0; i < 100; ++i) fresh.push_back(Symbol::fresh(i));
  auto exact1 = bernoulli_lln_check(fresh, 1.0);
  CHECK(exact1.observed == 1.0);
  CHECK(exact1.pass);

  auto law = RegularLaw::mixed(0.8, RegularLaw::zipf_like(0.5));
  SymbolStream s(law, 4242);
  auto path = s.sample(100000);
  auto check = bernoulli_lln_check(path, law.diffuse_mass());
  CHECK(check.pass);
  CHECK(check.tolerance == doctest::Approx(4.0 * std::sqrt(0.16 / 100000.0)));

  CHECK_THROWS_AS(bernoulli_lln_check(std::vector<Symbol>{}, 0.5),
                  std::invalid_argument);
}
