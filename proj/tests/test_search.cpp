#include "doctest.h"
#include "support.hpp"

#include "hmk/errors.hpp"
#include "hmk/geometry.hpp"
#include "hmk/search.hpp"

#include <algorithm>
#include <map>
#include <set>

using namespace hmk;
using testing::fourier_at;

namespace {

BasisMatrix conjugate_columns_sorted(const BasisMatrix& b) { return b.conjugate(); }

// Candidate sets compared up to column order and column phases.
bool same_basis(const BasisMatrix& a, const BasisMatrix& b) { return chordal_distance_sq(a, b) < 1e-9; }

void check_candidates(const TripletReport& r) {
    const BasisMatrix one = BasisMatrix::identity(r.mub1.dimension());
    for (const auto& c : r.candidates) {
        CHECK(is_hadamard(c));
        CHECK(unbiasedness_residual(one, c) < 1e-9);
        CHECK(unbiasedness_residual(r.mub1, c) < 1e-9);
    }
    const bool any_unbiased = r.max_offdiag >= 1.0 - 1e-6;
    CHECK(r.quartet_found == any_unbiased);
}

}  // namespace

TEST_CASE("alphabets") {
    const SearchAlphabet a = SearchAlphabet::parse("roots:12");
    CHECK(a.size() == 12);
    const SearchAlphabet b = SearchAlphabet::parse("roots:24,b2");
    CHECK(b.size() == 72);
    const SearchAlphabet c = SearchAlphabet::parse("roots:12,d^2");
    CHECK(c.size() == 60);
    CHECK(c.extra_power() == 2);
    for (const auto* al : {&a, &b, &c}) {
        const auto& s = al->symbols();
        for (std::size_t i = 0; i < s.size(); ++i)
            for (std::size_t j = i + 1; j < s.size(); ++j) CHECK_FALSE(s[i] == s[j]);
        for (const auto& p : s) CHECK(std::find(s.begin(), s.end(), p.conj()) != s.end());
    }
    CHECK_THROWS_AS(SearchAlphabet::parse("roots:x"), ParseError);
    CHECK_THROWS(SearchAlphabet::parse("roots:12,q"));
}

TEST_CASE("trivial enumerations") {
    const auto v = enumerate_unbiased_vectors({BasisMatrix::identity(6)}, SearchAlphabet(1));
    REQUIRE(v.size() == 1);
    for (const auto& p : v.front().entries) CHECK(p == PhaseValue::one());
}

TEST_CASE("five orthogonal vectors give no basis") {
    const auto v = enumerate_unbiased_vectors({BasisMatrix::identity(6), fourier_at(0, 0)}, SearchAlphabet(12));
    // columns of one census basis minus one vector
    const auto bases = assemble_bases(v);
    REQUIRE_FALSE(bases.empty());
    std::vector<PhaseVector> five;
    for (const auto& w : v) {
        const CVector x = w.normalized();
        bool in_first = false;
        for (int c = 0; c < 6; ++c) in_first = in_first || std::abs(std::abs(bases.front().entries().col(c).dot(x)) - 1.0) < 1e-9;
        if (in_first) five.push_back(w);
        if (five.size() == 5) break;
    }
    REQUIRE(five.size() == 5);
    CHECK(assemble_bases(five).empty());
}

TEST_CASE("roots 5 and 7 give no Hadamard matrices; roots 3 gives Tao's class") {
    CHECK(enumerate_dephased_hadamards(SearchAlphabet(5)).empty());
    CHECK(enumerate_dephased_hadamards(SearchAlphabet(7)).empty());
    const auto three = enumerate_hadamard_bases(SearchAlphabet(3));
    REQUIRE(three.size() == 1);
    CHECK(three.front().label == "S");
}

TEST_CASE("triplets over 12th roots") {
    const SearchAlphabet a(12);
    const Labeler labeler(a);
    const TripletReport f0 = triplet_search(fourier_at(0, 0), a, {}, {}, &labeler);
    CHECK(f0.candidates.size() == 4);
    check_candidates(f0);
    const TripletReport f6 = triplet_search(build(FamilySpec::fourier(TurnFraction(1, 6), TurnFraction(0, 1))), a, {}, {},
                                            &labeler);
    REQUIRE(f6.candidates.size() == 1);
    CHECK(f6.candidate_labels.front() == "F(1/6,0)");
    check_candidates(f6);
    CHECK_FALSE(f0.quartet_found);
}

TEST_CASE("accepted and rejected deviations are well separated") {
    ScanStats stats;
    const auto v = enumerate_unbiased_vectors({BasisMatrix::identity(6), fourier_at(0, 0)},
                                              SearchAlphabet::parse("roots:12,d^2"), {}, {}, &stats);
    CHECK(v.size() == 48);
    CHECK(stats.max_accepted < 1e-9);
    CHECK(stats.min_rejected > 1e-3);
}

TEST_CASE("candidate sets are closed under conjugation") {
    const SearchAlphabet a(12);
    const TripletReport r = triplet_search(fourier_at(0, 0), a);
    for (const auto& c : r.candidates) {
        const BasisMatrix cc = conjugate_columns_sorted(c);
        CHECK(std::any_of(r.candidates.begin(), r.candidates.end(), [&](const BasisMatrix& o) { return same_basis(o, cc); }));
    }
}

TEST_CASE("worker count does not change results") {
    const SearchAlphabet a(12);
    ScanOptions one, three;
    one.workers = 1;
    three.workers = 3;
    const auto refs = std::vector<BasisMatrix>{BasisMatrix::identity(6), fourier_at(0, 0)};
    CHECK(enumerate_unbiased_vectors(refs, a, {}, one) == enumerate_unbiased_vectors(refs, a, {}, three));
}

TEST_CASE("budget") {
    ScanOptions tiny;
    tiny.budget = 10;
    CHECK_THROWS_AS(enumerate_unbiased_vectors({BasisMatrix::identity(6), fourier_at(0, 0)}, SearchAlphabet(12), {}, tiny),
                    SearchTooLarge);
}

TEST_CASE("survey over 12th roots") {
    const SurveyReport rep = survey(SearchAlphabet(12));
    std::map<std::string, std::size_t> ext;
    for (const auto* e : rep.extendable()) ext[e->label] = e->report.candidates.size();
    const std::map<std::string, std::size_t> want{{"F(0,0)", 4}, {"F(1/6,0)", 1}, {"FT(1/6,0)", 1}};
    CHECK(ext == want);
    for (const auto& e : rep.entries) check_candidates(e.report);
}

TEST_CASE("classify groups scrambled copies") {
    std::mt19937_64 rng(3);
    const SearchAlphabet a(12);
    const Labeler labeler(a);
    const BasisMatrix f = fourier_at(0, 0);
    const BasisMatrix g = build(FamilySpec::fourier(TurnFraction(1, 6), TurnFraction(0, 1)));
    const auto classes = classify({f, testing::scramble(f, rng), g, testing::scramble(g, rng)}, labeler);
    REQUIRE(classes.size() == 2);
    CHECK(classes[0].members == 2);
    CHECK(classes[0].label == "F(0,0)");
    CHECK(classes[1].label == "F(1/6,0)");
}
