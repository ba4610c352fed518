#include "doctest.h"

#include "apm/theory.hpp"
#include "apm/word.hpp"
#include "oracles.hpp"

using namespace apm;

namespace {
struct Fix {
    CartesianPolygraph P;
    SymbolId s, t;

    Fix() {
        std::vector<SymbolId> ids;
        P = extend_with_constants(builtin_theory("GrpTilde"), {{"s", "m"}, {"t", "m"}}, &ids);
        s = ids[0];
        t = ids[1];
    }
};
} // namespace

TEST_CASE("plain word parse and render") {
    Fix f;
    const Signature& sig = *f.P.signature;
    Word w = parse_word(sig, "sts");
    CHECK(w == Word{f.s, f.t, f.s});
    CHECK(word_to_string(sig, w) == "sts");
    CHECK(parse_word(sig, "s t s") == w);
    CHECK(parse_word(sig, "1").empty());
    CHECK(word_to_string(sig, Word{}) == "1");
    CHECK_THROWS_AS(parse_word(sig, "sxt"), Error);
}

TEST_CASE("signed word parse and render") {
    Fix f;
    const Signature& sig = *f.P.signature;
    SignedWord w = parse_signed_word(sig, "s t^- s");
    REQUIRE(w.size() == 3);
    CHECK(w[0] == Letter{f.s, false});
    CHECK(w[1] == Letter{f.t, true});
    CHECK(word_to_string(sig, w) == "s t^- s");
    CHECK(parse_signed_word(sig, "1").empty());
}

TEST_CASE("formal inverse reverses and flips") {
    Fix f;
    SignedWord w{{f.s, false}, {f.t, true}};
    SignedWord iw = inverse(w);
    REQUIRE(iw.size() == 2);
    CHECK(iw[0] == Letter{f.t, false});
    CHECK(iw[1] == Letter{f.s, true});
    CHECK(group_reduce(concat(w, iw)).empty());
}

TEST_CASE("group_reduce matches the scan oracle on random words") {
    Fix f;
    auto gen = oracle::rng(17);
    std::uniform_int_distribution<int> len(0, 12), letter(0, 3);
    for (int trial = 0; trial < 300; ++trial) {
        SignedWord w;
        int n = len(gen);
        for (int i = 0; i < n; ++i) {
            int k = letter(gen);
            w.push_back(Letter{k % 2 == 0 ? f.s : f.t, k >= 2});
        }
        SignedWord ours = group_reduce(w);
        CHECK(ours == oracle::o_free_reduce(w));
        // a reduced word has no adjacent cancelling pair
        for (std::size_t i = 0; i + 1 < ours.size(); ++i) CHECK(ours[i + 1] != inverse(ours[i]));
    }
}

TEST_CASE("deglex compares by degree then id order") {
    Fix f;
    CHECK(deglex_compare(Word{f.s}, Word{f.s, f.t}) < 0);
    CHECK(deglex_compare(Word{f.s, f.t}, Word{f.t, f.s}) < 0);
    CHECK(deglex_compare(Word{f.t}, Word{f.t}) == 0);
}

TEST_CASE("DeglexOrder ranking") {
    Fix f;
    // s > t > s^- > t^-
    DeglexOrder ord = DeglexOrder::from_ranking(
        {{f.s, false}, {f.t, false}, {f.s, true}, {f.t, true}});
    CHECK(ord.rank(Letter{f.s, false}) == 3);
    CHECK(ord.rank(Letter{f.t, true}) == 0);
    // degree dominates
    CHECK(ord.compare(SignedWord{{f.s, false}}, SignedWord{{f.t, false}, {f.t, false}}) < 0);
    // same degree: compare by rank, first difference
    CHECK(ord.compare(SignedWord{{f.t, false}}, SignedWord{{f.s, false}}) < 0);
    CHECK(ord.compare(SignedWord{{f.s, true}}, SignedWord{{f.t, false}}) < 0);

    SUBCASE("inverse-incompatible rankings are rejected") {
        // s > t but t^- > s^-
        CHECK_THROWS_AS(DeglexOrder::from_ranking(
                            {{f.s, false}, {f.t, false}, {f.t, true}, {f.s, true}}),
                        Error);
    }
    SUBCASE("duplicate letters are rejected") {
        CHECK_THROWS_AS(DeglexOrder::from_ranking({{f.s, false}, {f.s, false}}), Error);
    }
    SUBCASE("letters outside the ranking are rejected") {
        CHECK_THROWS_AS(ord.rank(Letter{f.P.signature->symbol("e"), false}), Error);
    }
}
