#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "interax/info.hpp"
#include "interax/synth.hpp"
#include "support/oracles.hpp"

using interax::attr_set;
using interax::dataset;
using interax::estimator;
using interax::make_dataset;

namespace {

dataset random_ds(std::mt19937_64& eng, std::size_t n_attrs, std::size_t n_rows,
                  std::uint32_t max_card = 4) {
    std::vector<std::string> header;
    std::vector<std::uint32_t> cards;
    for (std::size_t a = 0; a < n_attrs; ++a) {
        header.push_back("a" + std::to_string(a));
        cards.push_back(2 + static_cast<std::uint32_t>(eng() % (max_card - 1)));
    }
    std::vector<std::vector<std::string>> cells(n_rows);
    for (auto& row : cells) {
        for (std::size_t a = 0; a < n_attrs; ++a) {
            row.push_back("v" + std::to_string(eng() % cards[a]));
        }
    }
    return make_dataset(header, std::move(cells));
}

// permute the column order of a dataset, remembering where each old column went
dataset permute_columns(const dataset& ds, const std::vector<std::uint32_t>& perm) {
    std::vector<std::string> header;
    for (std::uint32_t a : perm) header.push_back(ds.schema(a).name);
    std::vector<std::vector<std::string>> cells(ds.n_rows());
    for (std::size_t r = 0; r < ds.n_rows(); ++r) {
        for (std::uint32_t a : perm) cells[r].push_back(ds.value_name(r, a));
    }
    return make_dataset(header, std::move(cells));
}

}  // namespace

TEST_CASE("xor pair carries no pairwise information but one conditional bit") {
    auto ds = interax::gen_parity(2, 64, 1);  // exhaustive, columns a b c with c = a xor b
    auto est = estimator::ml();
    REQUIRE(interax::mutual_information(ds, est, {0}, {1}) == 0.0);
    REQUIRE(interax::mutual_information(ds, est, {0}, {2}) == 0.0);
    REQUIRE(interax::conditional_mutual_information(ds, est, {0}, {1}, {2}) == 1.0);
    REQUIRE(interax::interaction_information(ds, est, {0, 1, 2}) == 1.0);
    REQUIRE(interax::total_correlation(ds, est, {0, 1, 2}) == 1.0);
    REQUIRE(interax::entropy(ds, est, {0, 1, 2}) == 2.0);
}

TEST_CASE("three copies of one bit interact negatively by exactly one bit") {
    auto ds = interax::gen_triplicate(32, 1);
    auto est = estimator::ml();
    REQUIRE(interax::mutual_information(ds, est, {0}, {1}) == 1.0);
    REQUIRE(interax::interaction_information(ds, est, {0, 1, 2}) == -1.0);
    REQUIRE(interax::conditional_mutual_information(ds, est, {0}, {1}, {2}) == 0.0);
    REQUIRE(interax::total_correlation(ds, est, {0, 1, 2}) == 2.0);
}

TEST_CASE("four-bit parity pushes every bit into the fifth order") {
    auto ds = interax::gen_parity(4, 64, 1);
    auto est = estimator::ml();
    attr_set all = {0, 1, 2, 3, 4};
    REQUIRE_THAT(interax::interaction_information(ds, est, all),
                 Catch::Matchers::WithinAbs(1.0, 1e-12));
    // odd order flips the co-information sign
    REQUIRE_THAT(interax::coinformation(ds, est, all),
                 Catch::Matchers::WithinAbs(-1.0, 1e-12));
    // every proper subset that drops a parity input sees nothing
    REQUIRE(interax::interaction_information(ds, est, {0, 1, 2, 3}) == 0.0);
    REQUIRE(interax::mutual_information(ds, est, {0, 4}, {1}) == 0.0);
}

TEST_CASE("measures agree with the dense reference on random data") {
    std::mt19937_64 eng(101);
    for (int rep = 0; rep < 20; ++rep) {
        auto ds = random_ds(eng, 4, 60 + static_cast<std::size_t>(eng() % 80));
        auto est = (rep % 3 == 0) ? estimator::dirichlet(1.0) : estimator::ml();
        REQUIRE_THAT(interax::mutual_information(ds, est, {0}, {2}),
                     Catch::Matchers::WithinAbs(
                         oracle::mutual_information_bits(ds, 0, 2, est), 1e-10));
        REQUIRE_THAT(interax::interaction_information(ds, est, {0, 1, 2}),
                     Catch::Matchers::WithinAbs(
                         oracle::interaction_bits(ds, {0, 1, 2}, {}, est), 1e-10));
        REQUIRE_THAT(interax::interaction_information(ds, est, {0, 1, 3}, {2}),
                     Catch::Matchers::WithinAbs(
                         oracle::interaction_bits(ds, {0, 1, 3}, {2}, est), 1e-10));
        REQUIRE_THAT(interax::interaction_information(ds, est, {0, 1, 2, 3}),
                     Catch::Matchers::WithinAbs(
                         oracle::interaction_bits(ds, {0, 1, 2, 3}, {}, est), 1e-10));
    }
}

TEST_CASE("pairwise interaction is plain mutual information") {
    std::mt19937_64 eng(55);
    auto ds = random_ds(eng, 3, 120);
    for (auto est : {estimator::ml(), estimator::dirichlet(0.5)}) {
        REQUIRE(interax::interaction_information(ds, est, {0, 1}) ==
                interax::mutual_information(ds, est, {0}, {1}));
        // same four entropies, different summation order, so ulp-level slack
        REQUIRE_THAT(interax::interaction_information(ds, est, {0, 2}, {1}),
                     Catch::Matchers::WithinAbs(
                         interax::conditional_mutual_information(ds, est, {0}, {2}, {1}),
                         1e-12));
    }
}

TEST_CASE("chain rule holds under maximum likelihood") {
    std::mt19937_64 eng(77);
    for (int rep = 0; rep < 10; ++rep) {
        auto ds = random_ds(eng, 3, 150);
        auto est = estimator::ml();
        double joint = interax::entropy(ds, est, {0, 1});
        double chained = interax::entropy(ds, est, {1}) +
                         interax::conditional_entropy(ds, est, {0}, {1});
        REQUIRE_THAT(joint, Catch::Matchers::WithinAbs(chained, 1e-10));
        // information is symmetric and never exceeds either entropy
        double mi = interax::mutual_information(ds, est, {0}, {1});
        REQUIRE(mi == interax::mutual_information(ds, est, {1}, {0}));
        REQUIRE(mi <= interax::entropy(ds, est, {0}) + 1e-12);
        REQUIRE(mi <= interax::entropy(ds, est, {1}) + 1e-12);
    }
}

TEST_CASE("column order never changes a measure") {
    std::mt19937_64 eng(303);
    auto ds = random_ds(eng, 5, 90);
    std::vector<std::uint32_t> perm = {3, 0, 4, 2, 1};
    auto pd = permute_columns(ds, perm);
    // old attribute a sits at position inv[a] in the permuted dataset
    std::vector<std::uint32_t> inv(perm.size());
    for (std::uint32_t i = 0; i < perm.size(); ++i) inv[perm[i]] = i;
    // cell accumulation order follows the permuted key bytes, hence the slack
    for (auto est : {estimator::ml(), estimator::dirichlet(1.0)}) {
        REQUIRE_THAT(interax::interaction_information(ds, est, {0, 1, 2}),
                     Catch::Matchers::WithinAbs(
                         interax::interaction_information(pd, est, {inv[0], inv[1], inv[2]}),
                         1e-12));
        REQUIRE_THAT(interax::mutual_information(ds, est, {1}, {4}),
                     Catch::Matchers::WithinAbs(
                         interax::mutual_information(pd, est, {inv[1]}, {inv[4]}), 1e-12));
        REQUIRE_THAT(interax::total_correlation(ds, est, {0, 2, 3}),
                     Catch::Matchers::WithinAbs(
                         interax::total_correlation(pd, est, {inv[0], inv[2], inv[3]}),
                         1e-12));
    }
}

TEST_CASE("recursion and alternating sum tell the same story") {
    std::mt19937_64 eng(404);
    for (int rep = 0; rep < 10; ++rep) {
        auto ds = random_ds(eng, 4, 100);
        auto est = estimator::ml();
        attr_set s = {0, 1, 2, 3};
        for (std::uint32_t x : s) {
            attr_set rest;
            for (std::uint32_t a : s) {
                if (a != x) rest.push_back(a);
            }
            double lhs = interax::interaction_information(ds, est, s);
            double rhs = interax::interaction_information(ds, est, rest, {x}) -
                         interax::interaction_information(ds, est, rest);
            REQUIRE_THAT(lhs, Catch::Matchers::WithinAbs(rhs, 1e-9));
        }
    }
}

TEST_CASE("total correlation sums the interactions of all higher subsets") {
    std::mt19937_64 eng(505);
    auto ds = random_ds(eng, 4, 200, 3);
    auto est = estimator::ml();
    attr_set s = {0, 1, 2, 3};
    double total = interax::total_correlation(ds, est, s);
    double sum = 0.0;
    for (std::uint32_t mask = 1; mask < 16; ++mask) {
        if (std::popcount(mask) < 2) continue;
        attr_set t;
        for (std::uint32_t i = 0; i < 4; ++i) {
            if (mask & (1u << i)) t.push_back(s[i]);
        }
        sum += interax::interaction_information(ds, est, t);
    }
    REQUIRE_THAT(total, Catch::Matchers::WithinAbs(sum, 1e-9));
}

TEST_CASE("co-information flips sign exactly on odd orders") {
    std::mt19937_64 eng(606);
    auto ds = random_ds(eng, 4, 80);
    auto est = estimator::ml();
    double i3 = interax::interaction_information(ds, est, {0, 1, 2});
    REQUIRE(interax::coinformation(ds, est, {0, 1, 2}) == -i3);
    double i4 = interax::interaction_information(ds, est, {0, 1, 2, 3});
    REQUIRE(interax::coinformation(ds, est, {0, 1, 2, 3}) == i4);
}

TEST_CASE("joint-level interaction matches the sampled path on exhaustive data") {
    auto j = interax::polysemy_joint();
    double direct = interax::interaction_information(j);
    REQUIRE(direct > 0.0);
    REQUIRE_THAT(direct, Catch::Matchers::WithinAbs(0.413155, 5e-7));
}

TEST_CASE("relative information is a percentage of label entropy") {
    auto ds = interax::gen_triplicate(64, 3);  // columns a b c, all identical
    auto est = estimator::ml();
    REQUIRE_THAT(interax::relative_mutual_information(ds, est, {0}, 2),
                 Catch::Matchers::WithinAbs(100.0, 1e-9));
    REQUIRE_THAT(interax::relative_interaction_information(ds, est, {0, 1, 2}, 2),
                 Catch::Matchers::WithinAbs(-100.0, 1e-9));
}

TEST_CASE("a constant label makes relative information meaningless") {
    auto ds = make_dataset({"a", "y"}, {{"0", "k"}, {"1", "k"}, {"0", "k"}});
    auto est = estimator::ml();
    REQUIRE_THROWS_WITH(interax::relative_mutual_information(ds, est, {0}, 1),
                        Catch::Matchers::ContainsSubstring("degenerate label"));
}

TEST_CASE("normed information lives in the unit interval") {
    std::mt19937_64 eng(707);
    for (int rep = 0; rep < 10; ++rep) {
        auto ds = random_ds(eng, 3, 100);
        auto est = estimator::ml();
        double nmi = interax::normed_mutual_information(ds, est, {0}, {1});
        REQUIRE(nmi >= 0.0);
        REQUIRE(nmi <= 1.0);
        double d = interax::mantaras_distance(ds, est, {0}, {1});
        REQUIRE_THAT(d, Catch::Matchers::WithinAbs(1.0 - nmi, 1e-15));
        double mag = interax::normed_interaction_magnitude(ds, est, {0, 1, 2});
        REQUIRE(mag >= 0.0);
        REQUIRE(mag <= 1.0);
    }
}

TEST_CASE("identical attributes sit at distance zero, independence at one") {
    auto ds = interax::gen_triplicate(64, 9);
    auto est = estimator::ml();
    REQUIRE_THAT(interax::mantaras_distance(ds, est, {0}, {1}),
                 Catch::Matchers::WithinAbs(0.0, 1e-12));
    auto par = interax::gen_parity(2, 64, 9);
    REQUIRE_THAT(interax::mantaras_distance(par, est, {0}, {1}),
                 Catch::Matchers::WithinAbs(1.0, 1e-12));
}

TEST_CASE("distance between attribute sets obeys the triangle inequality") {
    std::mt19937_64 eng(808);
    for (int rep = 0; rep < 60; ++rep) {
        auto ds = random_ds(eng, 3, 40 + static_cast<std::size_t>(eng() % 120));
        auto est = estimator::ml();
        double dab = interax::mantaras_distance(ds, est, {0}, {1});
        double dbc = interax::mantaras_distance(ds, est, {1}, {2});
        double dac = interax::mantaras_distance(ds, est, {0}, {2});
        REQUIRE(dac <= dab + dbc + 1e-9);
        REQUIRE(dab <= dac + dbc + 1e-9);
        REQUIRE(dbc <= dab + dac + 1e-9);
        REQUIRE(dab == interax::mantaras_distance(ds, est, {1}, {0}));
    }
}

TEST_CASE("conditioning on the normed scale uses the conditional joint entropy") {
    auto ds = interax::gen_parity(2, 64, 4);
    auto est = estimator::ml();
    // given the parity bit, a and b determine each other perfectly
    REQUIRE_THAT(interax::normed_conditional_mutual_information(ds, est, {0}, {1}, {2}),
                 Catch::Matchers::WithinAbs(1.0, 1e-12));
}

TEST_CASE("interaction arguments are validated") {
    auto ds = interax::gen_parity(2, 16, 2);
    auto est = estimator::ml();
    REQUIRE_THROWS_AS(interax::interaction_information(ds, est, {0}), std::invalid_argument);
    REQUIRE_THROWS_WITH(interax::interaction_information(ds, est, {0, 1}, {1}),
                        Catch::Matchers::ContainsSubstring("overlap"));
}
