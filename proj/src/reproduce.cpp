#include "hmk/reproduce.hpp"

#include "hmk/catalog.hpp"
#include "hmk/defect.hpp"
#include "hmk/equivalence.hpp"
#include "hmk/errors.hpp"
#include "hmk/fourier.hpp"
#include "hmk/geometry.hpp"
#include "hmk/search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace hmk {

using nlohmann::json;

namespace {

class Recorder {
public:
    explicit Recorder(std::string section) : section_(std::move(section)), start_(now()) {}

    void add(std::string claim, std::string expected, std::string observed, bool pass, json raw = json::object()) {
        ClaimResult c;
        c.section = section_;
        c.claim = std::move(claim);
        c.expected = std::move(expected);
        c.observed = std::move(observed);
        c.pass = pass;
        c.raw = std::move(raw);
        const double t = now();
        c.seconds = t - start_;
        start_ = t;
        claims_.push_back(std::move(c));
    }
    /// Restarts the clock so that setup work is charged to the next claim.
    void mark() { start_ = now(); }
    std::vector<ClaimResult> take() { return std::move(claims_); }

private:
    static double now() {
        return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
    }
    std::string section_;
    double start_;
    std::vector<ClaimResult> claims_;
};

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

ScanOptions scan_options(const RunConfig& c) {
    ScanOptions o;
    o.workers = c.workers;
    o.budget = c.budget;
    return o;
}

std::string count_map_str(const std::map<std::string, std::size_t>& m) {
    std::string s;
    for (const auto& [k, v] : m) s += (s.empty() ? "" : " ") + k + ":" + std::to_string(v);
    return s.empty() ? "none" : s;
}

// multiset of rounded off-diagonal entries of one row, e.g. "0.78x3 0.93x6"
std::string row_profile(const Eigen::MatrixXd& d, Eigen::Index row) {
    std::map<std::string, int> counts;
    for (Eigen::Index j = 0; j < d.cols(); ++j)
        if (j != row) ++counts[rounded(d(row, j))];
    std::string s;
    for (const auto& [k, v] : counts) s += (s.empty() ? "" : " ") + k + "x" + std::to_string(v);
    return s;
}

// multiset of rounded upper-triangle entries
std::string edge_profile(const Eigen::MatrixXd& d) {
    std::map<std::string, int> counts;
    for (Eigen::Index i = 0; i < d.rows(); ++i)
        for (Eigen::Index j = i + 1; j < d.cols(); ++j) ++counts[rounded(d(i, j))];
    std::string s;
    for (const auto& [k, v] : counts) s += (s.empty() ? "" : " ") + k + "x" + std::to_string(v);
    return s.empty() ? "none" : s;
}

// common row profile, or "mixed: ..." when rows differ
std::string corner_profile(const Eigen::MatrixXd& d) {
    std::set<std::string> rows;
    for (Eigen::Index i = 0; i < d.rows(); ++i) rows.insert(row_profile(d, i));
    if (rows.size() == 1) return *rows.begin();
    std::string s = "mixed:";
    for (const auto& r : rows) s += " [" + r + "]";
    return s;
}

json matrix_json(const Eigen::MatrixXd& d) {
    json out = json::array();
    for (Eigen::Index i = 0; i < d.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < d.cols(); ++j) row.push_back(d(i, j));
        out.push_back(std::move(row));
    }
    return out;
}

std::size_t distinct_vectors(const std::vector<BasisMatrix>& bases) {
    std::set<std::vector<std::pair<long long, long long>>> seen;
    for (const auto& b : bases)
        for (int c = 0; c < b.dimension(); ++c) {
            std::vector<std::pair<long long, long long>> key;
            for (int r = 0; r < b.dimension(); ++r)
                key.emplace_back(std::llround(b(r, c).real() * 1e8), std::llround(b(r, c).imag() * 1e8));
            seen.insert(std::move(key));
        }
    return seen.size();
}

bool all_equivalent_to(const std::vector<BasisMatrix>& bases, const BasisMatrix& target) {
    for (const auto& b : bases)
        if (!are_equivalent(b, target)) return false;
    return true;
}

std::string join(const std::vector<std::string>& parts) {
    std::string s;
    for (const auto& p : parts) s += (s.empty() ? "" : " ") + p;
    return s.empty() ? "none" : s;
}

void survey_claims(Recorder& rec, const SurveyReport& rep, const std::map<std::string, std::size_t>& expected) {
    std::map<std::string, std::size_t> observed;
    json raw = json::object();
    double worst = 0.0;
    bool quartet = false;
    for (const auto& e : rep.entries) {
        raw[e.label] = {{"class_size", e.class_size},
                        {"vectors", e.report.vectors},
                        {"candidates", e.report.candidates.size()},
                        {"max_offdiag", e.report.max_offdiag}};
        if (!e.report.candidates.empty()) observed[e.label] = e.report.candidates.size();
        worst = std::max(worst, e.report.max_offdiag);
        quartet = quartet || e.report.quartet_found;
    }
    raw["hadamard_count"] = rep.hadamard_count;
    rec.add("extendable pairs and candidate counts", count_map_str(expected), count_map_str(observed),
            observed == expected, raw);
    rec.add("no MUB quartet", "max D2 between candidates < 1", rounded(worst), !quartet && worst < 1.0 - 1e-6,
            json{{"max_offdiag", worst}});
}

const SurveyEntry* find_entry(const SurveyReport& rep, const std::string& label) {
    for (const auto& e : rep.entries)
        if (e.label == label) return &e;
    return nullptr;
}

std::vector<ClaimResult> section_s5(int roots, const RunConfig& cfg) {
    Recorder rec(roots == 12 ? "s5-12" : "s5-24");
    const SurveyReport rep = survey(SearchAlphabet(roots), cfg.tol, scan_options(cfg));
    std::map<std::string, std::size_t> expected{{"F(0,0)", 4}, {"F(1/6,0)", 1}, {"FT(1/6,0)", 1}};
    if (roots == 24) {
        expected["F(1/6,1/12)"] = 4;
        expected["D(1/8)"] = 4;
    }
    survey_claims(rec, rep, expected);

    const auto labels_of = [&](const std::string& pair) {
        const SurveyEntry* e = find_entry(rep, pair);
        return e ? join(e->report.candidate_labels) : std::string("missing");
    };
    if (roots == 12) {
        const std::string ft = labels_of("FT(1/6,0)");
        rec.add("(1, FT(1/6,0)) candidate class", "F(0,0)", ft, ft == "F(0,0)");
        const std::string f = labels_of("F(1/6,0)");
        rec.add("(1, F(1/6,0)) candidate class", "F(1/6,0)", f, f == "F(1/6,0)");
    } else {
        const SurveyEntry* d = find_entry(rep, "D(1/8)");
        const SurveyEntry* f = find_entry(rep, "F(1/6,1/12)");
        const std::string dp = d ? edge_profile(d->report.distances) : "missing";
        const std::string fp = f ? edge_profile(f->report.distances) : "missing";
        const std::string dl = labels_of("D(1/8)");
        const std::string fl = labels_of("F(1/6,1/12)");
        const json draw = d ? json{{"distances", matrix_json(d->report.distances)}} : json::object();
        const json fraw = f ? json{{"distances", matrix_json(f->report.distances)}} : json::object();
        rec.add("(1, D(1/8)) candidate simplex edges", "0.89x4 0.95x2", dp, dp == "0.89x4 0.95x2", draw);
        rec.add("(1, D(1/8)) candidate classes", "F(1/6,1/12) x4", dl,
                dl == "F(1/6,1/12) F(1/6,1/12) F(1/6,1/12) F(1/6,1/12)");
        rec.add("(1, F(1/6,1/12)) candidate simplex edges", "0.93x6", fp, fp == "0.93x6", fraw);
        rec.add("(1, F(1/6,1/12)) candidate classes", "D(1/8) x4", fl, fl == "D(1/8) D(1/8) D(1/8) D(1/8)");
        // The two simplex shapes with the starting pairs exchanged.
        rec.add("exchanged pairs: (1, F(1/6,1/12)) candidate simplex edges", "0.89x4 0.95x2", fp,
                fp == "0.89x4 0.95x2", fraw);
        rec.add("exchanged pairs: (1, D(1/8)) candidate simplex edges", "0.93x6", dp, dp == "0.93x6", draw);
    }
    return rec.take();
}

std::vector<ClaimResult> section_s6(const RunConfig& cfg) {
    Recorder rec("s6");
    const ScanOptions opts = scan_options(cfg);

    const auto classical = enumerate_biunimodular(6, SearchAlphabet(12), true, cfg.tol, opts);
    const bool all_classical =
        std::all_of(classical.begin(), classical.end(), [](const BiunimodularRecord& r) { return r.classical; });
    rec.add("biunimodular sequences over 12th roots (N=6)", "12 classical",
            std::to_string(classical.size()) + (all_classical ? " classical" : " (not all classical)"),
            classical.size() == 12 && all_classical);
    const auto extended = enumerate_biunimodular(6, census_alphabet(), true, cfg.tol, opts);
    rec.add("biunimodular sequences over the d-extended alphabet (N=6)", "48", std::to_string(extended.size()),
            extended.size() == 48, json{{"alphabet", census_alphabet().descriptor()}});
    const auto two = enumerate_biunimodular(2, SearchAlphabet(4), true, cfg.tol, opts);
    rec.add("biunimodular sequences for N=2", "2", std::to_string(two.size()), two.size() == 2);

    const BasisMatrix c = build(FamilySpec::bjorck());
    const CVector first = std::sqrt(6.0) * c.entries().col(0);
    const double rebuild = max_abs_diff(circulant_from_sequence(first).entries(), c.entries());
    const Intertwiner w = circulant_intertwiner(c);
    rec.add("C is circulant and F†C = D F†", "rebuild and identity to 1e-10",
            "rebuild " + sci(rebuild) + ", identity " + sci(w.residual),
            rebuild < 1e-12 && w.residual < 1e-10);

    rec.mark();
    const Census census = fourier_census(cfg.tol, opts);
    rec.add("vectors unbiased to 1 and F", "48", std::to_string(census.vectors.size()), census.vectors.size() == 48,
            json{{"max_accepted", census.vector_stats.max_accepted}, {"min_rejected", census.vector_stats.min_rejected}});
    rec.add("bases formed by those vectors", "16", std::to_string(census.bases.size()), census.bases.size() == 16,
            json{{"min_rejected", census.basis_stats.min_rejected}});
    std::map<std::string, std::size_t> groups;
    for (const auto& b : census.bases) ++groups[b.group];
    const std::map<std::string, std::size_t> want_groups{{"i", 2}, {"ii", 2}, {"iii", 6}, {"iv", 6}};
    rec.add("group sizes", count_map_str(want_groups), count_map_str(groups), groups == want_groups);
    const bool twice = !census.vector_multiplicity.empty() &&
                       std::all_of(census.vector_multiplicity.begin(), census.vector_multiplicity.end(),
                                   [](int m) { return m == 2; });
    rec.add("every vector lies in exactly two bases", "2", twice ? "2" : "not uniform", twice);

    // distance table by group relation
    const auto k = census.bases.size();
    std::map<std::string, std::set<std::string>> by_relation;
    std::vector<std::size_t> classical_idx, group3, group4;
    for (std::size_t i = 0; i < k; ++i) {
        const auto& g = census.bases[i].group;
        if (g == "i" || g == "ii") classical_idx.push_back(i);
        if (g == "iii") group3.push_back(i);
        if (g == "iv") group4.push_back(i);
    }
    const auto sub = [&](const std::vector<std::size_t>& idx) {
        Eigen::MatrixXd m(static_cast<Eigen::Index>(idx.size()), static_cast<Eigen::Index>(idx.size()));
        for (std::size_t a = 0; a < idx.size(); ++a)
            for (std::size_t b = 0; b < idx.size(); ++b)
                m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                    census.distances(static_cast<Eigen::Index>(idx[a]), static_cast<Eigen::Index>(idx[b]));
        return m;
    };
    const std::string square = corner_profile(sub(classical_idx));
    rec.add("classical bases form a square", "0.40x2 0.80x1 per corner", square, square == "0.40x2 0.80x1");
    std::set<std::string> cross, between;
    for (std::size_t a : classical_idx)
        for (std::size_t b = 0; b < k; ++b)
            if (!census.bases[b].classical)
                cross.insert(rounded(census.distances(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b))));
    for (std::size_t a : group3)
        for (std::size_t b : group4)
            between.insert(rounded(census.distances(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b))));
    const auto set_str = [](const std::set<std::string>& s) {
        std::string out;
        for (const auto& v : s) out += (out.empty() ? "" : " ") + v;
        return out.empty() ? std::string("none") : out;
    };
    rec.add("classical to non-classical distance", "0.92", set_str(cross), set_str(cross) == "0.92");
    rec.add("group iii to group iv distance", "0.74", set_str(between), set_str(between) == "0.74");
    const std::string p3 = corner_profile(sub(group3));
    const std::string p4 = corner_profile(sub(group4));
    rec.add("within-group distances (iii)", "0.86x2 0.88x1 0.93x2 per corner", p3, p3 == "0.86x2 0.88x1 0.93x2");
    rec.add("within-group distances (iv)", "0.86x2 0.88x1 0.93x2 per corner", p4, p4 == "0.86x2 0.88x1 0.93x2");
    rec.add("largest distance in the table", "0.93 (< 1, no quartet)", rounded(census.max_distance),
            rounded(census.max_distance) == "0.93" && census.max_distance < 1.0 - 1e-6,
            json{{"max_distance", census.max_distance}, {"distances", matrix_json(census.distances)}});
    return rec.take();
}

struct TripletExpectation {
    std::string name;
    BasisMatrix mub1;
    std::size_t candidates;
    BasisMatrix third_class;  // every candidate must be equivalent to it
    std::string third_label;
};

std::vector<ClaimResult> section_s7(Special extra, const RunConfig& cfg) {
    const ScanOptions opts = scan_options(cfg);
    const SearchAlphabet alphabet(24, {extra}, 1);
    const Labeler labeler(alphabet);
    if (extra == Special::b1) {
        Recorder rec("s7-b1");
        const PhaseValue c1 = PhaseValue::special(Special::b1);
        const BasisMatrix ft_pt = build(FamilySpec::fourier_transposed(TurnFraction(1, 6), TurnFraction(1, 12)));
        const BasisMatrix ft_c1 = build(FamilySpec::fourier_transposed(c1, PhaseValue::one()));
        const BasisMatrix f_c1 = build(FamilySpec::fourier(c1, PhaseValue::one()));
        const BasisMatrix d_m18 = build(FamilySpec::dita(TurnFraction(-1, 8)));
        const std::vector<TripletExpectation> runs{
            {"(1, FT(1/6,1/12))", ft_pt, 4, ft_c1, "FT(c1,0)"},
            {"(1, FT(c1,0))", ft_c1, 2, ft_pt, "FT(1/6,1/12)"},
            {"(1, F(c1,0))", f_c1, 2, d_m18, "D(-1/8)"},
        };
        for (const auto& r : runs) {
            const TripletReport t = triplet_search(r.mub1, alphabet, cfg.tol, opts, &labeler);
            const bool cls = all_equivalent_to(t.candidates, r.third_class);
            rec.add(r.name + " triplets over " + alphabet.descriptor(),
                    std::to_string(r.candidates) + " x " + r.third_label,
                    std::to_string(t.candidates.size()) + " x " + join(t.candidate_labels),
                    t.candidates.size() == r.candidates && cls,
                    json{{"vectors", t.vectors}, {"distances", matrix_json(t.distances)}, {"labels", t.candidate_labels}});
        }
        return rec.take();
    }

    Recorder rec("s7-b2");
    const BasisMatrix d0 = build(FamilySpec::dita(TurnFraction(0, 1)));
    const BasisMatrix f_c2 =
        build(FamilySpec::fourier(PhaseValue::special(Special::b2, 1, TurnFraction(9, 24)), PhaseValue::one()));
    const TripletReport from_d = triplet_search(d0, alphabet, cfg.tol, opts, &labeler);
    const TripletReport from_f = triplet_search(f_c2, alphabet, cfg.tol, opts, &labeler);
    const auto summary = [&](const TripletReport& t, const BasisMatrix& third, const std::string& third_label) {
        const bool cls = all_equivalent_to(t.candidates, third);
        return std::to_string(t.vectors) + " vectors, " + std::to_string(t.candidates.size()) + " bases from " +
               std::to_string(distinct_vectors(t.candidates)) + " vectors, " +
               (cls ? third_label : join(t.candidate_labels));
    };
    const auto raw_of = [&](const TripletReport& t) {
        return json{{"vectors", t.vectors},
                    {"bases", t.candidates.size()},
                    {"distances", matrix_json(t.distances)},
                    {"labels", t.candidate_labels}};
    };
    const auto is_pair_077 = [&](const TripletReport& t, const BasisMatrix& third) {
        return t.candidates.size() == 2 && all_equivalent_to(t.candidates, third) && edge_profile(t.distances) == "0.77x1";
    };
    const auto is_polytope = [&](const TripletReport& t, const BasisMatrix& third) {
        return t.vectors == 120 && t.candidates.size() == 10 && distinct_vectors(t.candidates) == 60 &&
               all_equivalent_to(t.candidates, third) && corner_profile(t.distances) == "0.78x3 0.93x6";
    };
    const std::string pd = from_d.candidates.size() == 2 ? edge_profile(from_d.distances) : corner_profile(from_d.distances);
    const std::string pf = from_f.candidates.size() == 2 ? edge_profile(from_f.distances) : corner_profile(from_f.distances);
    rec.add("(1, D(0)) triplets over roots:24,b2", "2 x F(9/24+c2,0), D2 = 0.77",
            summary(from_d, f_c2, "F(9/24+c2,0)") + ", D2 " + pd, is_pair_077(from_d, f_c2), raw_of(from_d));
    rec.add("(1, F(9/24+c2,0)) triplets over roots:24,b2",
            "120 vectors, 10 bases from 60 vectors, D(0), per corner 0.78x3 0.93x6",
            summary(from_f, d0, "D(0)") + ", per corner " + pf, is_polytope(from_f, d0), raw_of(from_f));
    // The same numbers with the two starting pairs exchanged.
    rec.add("exchanged pairs: (1, D(0)) triplets", "120 vectors, 10 bases from 60 vectors, F(9/24+c2,0), per corner 0.78x3 0.93x6",
            summary(from_d, f_c2, "F(9/24+c2,0)") + ", per corner " + pd, is_polytope(from_d, f_c2), raw_of(from_d));
    rec.add("exchanged pairs: (1, F(9/24+c2,0)) triplets", "2 x D(0), D2 = 0.77",
            summary(from_f, d0, "D(0)") + ", D2 " + pf, is_pair_077(from_f, d0), raw_of(from_f));
    {
        // explicit triplet (1, F_D, D_bc) with D = diag(w^9 b2, 1, 1)
        const BasisMatrix fd = build(FamilySpec::twisted_fourier(
            {PhaseValue::special(Special::b2, 1, TurnFraction(9, 24)), PhaseValue::one(), PhaseValue::one()}));
        const BasisMatrix dbc = build(FamilySpec::dita_block_circulant(0));
        const double r = unbiasedness_residual(fd, dbc);
        const bool ok = are_unbiased(BasisMatrix::identity(6), fd, cfg.tol) &&
                        are_unbiased(BasisMatrix::identity(6), dbc, cfg.tol) && are_unbiased(fd, dbc, cfg.tol) &&
                        are_equivalent(dbc, d0).has_value() && are_equivalent(fd, f_c2).has_value();
        rec.add("(1, F_D, D_bc) is a MUB triplet", "unbiased, F_D ~ F(9/24+c2,0), D_bc ~ D(0)",
                ok ? "yes (residual " + sci(r) + ")" : "no", ok);
    }
    return rec.take();
}

std::vector<ClaimResult> section_s8(const RunConfig& cfg) {
    Recorder rec("s8");
    const struct {
        const char* name;
        BasisMatrix m;
        int want;
    } cases[] = {
        {"F(0,0)", build(FamilySpec::fourier(TurnFraction(0, 1), TurnFraction(0, 1))), 4},
        {"C", build(FamilySpec::bjorck()), 4},
        {"D(0)", build(FamilySpec::dita(TurnFraction(0, 1))), 4},
        {"S", tao(), 0},
    };
    for (const auto& c : cases) {
        const DefectAnalysis a = defect_analysis(c.m, cfg.tol);
        rec.add(std::string("defect of ") + c.name, std::to_string(c.want), std::to_string(a.defect),
                a.defect == c.want, json{{"rank", a.rank}, {"smallest_kept", a.singular_values(a.rank - 1)}});
    }

    std::mt19937_64 rng(cfg.seed);
    const double lo = std::acos((std::sqrt(3.0) - 1.0) / 2.0);
    std::uniform_real_distribution<double> theta(lo, kTwoPi - lo);
    std::map<int, int> seen;
    json thetas = json::array();
    for (int i = 0; i < 100; ++i) {
        const double t = theta(rng);
        const int branch = i % 2 == 0 ? +1 : -1;
        thetas.push_back(t);
        ++seen[defect(build(FamilySpec::hermitian(t, branch)), cfg.tol)];
    }
    std::string obs;
    for (const auto& [d, n] : seen) obs += (obs.empty() ? "" : " ") + std::to_string(n) + " x " + std::to_string(d);
    rec.add("defect along B(theta), 100 sampled admissible theta", "100 x 4", obs,
            seen.size() == 1 && seen.begin()->first == 4, json{{"theta", thetas}});

    std::uniform_real_distribution<double> small(-0.1, 0.1);
    double worst_stage = 0, worst_76 = 0, worst_77 = 0, worst_78 = 0, worst_anti = 0, worst_z = 0, worst_gauge = 0,
           worst_first = 0;
    double p_lo = 1e9, p_hi = -1e9;
    bool all_fit = true;
    for (int i = 0; i < 100; ++i) {
        const ExpansionSeed seed{small(rng), small(rng), small(rng), small(rng)};
        const ExpansionReport r = dita_expand(seed, 3);
        for (const auto& s : r.stages) worst_stage = std::max(worst_stage, s.residual);
        worst_first = std::max(worst_first, r.first_order_formula_deviation);
        worst_76 = std::max(worst_76, r.y_diagonal_formula_max);
        worst_77 = std::max(worst_77, r.y_symmetric_spread);
        worst_78 = std::max(worst_78, r.y_closed_form_deviation);
        worst_anti = std::max(worst_anti, r.y_antisymmetric_max);
        worst_z = std::max({worst_z, r.z_diagonal_max, r.z_symmetric_max});
        worst_gauge = std::max(worst_gauge, r.gauge_max);
        if (r.convergence_order) {
            p_lo = std::min(p_lo, *r.convergence_order);
            p_hi = std::max(p_hi, *r.convergence_order);
        } else {
            all_fit = false;
        }
    }
    const auto below = [](double v, double bound) { return sci(v) + (v < bound ? " < " : " >= ") + sci(bound); };
    rec.add("expansion stages consistent (100 seeds, |s| <= 0.1)", "residual < 1e-10", below(worst_stage, 1e-10),
            worst_stage < 1e-10);
    rec.add("first-order dependent phases match the solved system", "< 1e-10", below(worst_first, 1e-10),
            worst_first < 1e-10);
    rec.add("second order: antisymmetric part vanishes", "< 1e-10", below(worst_anti, 1e-10), worst_anti < 1e-10);
    rec.add("second order: diagonal formulas", "< 1e-10", below(worst_76, 1e-10), worst_76 < 1e-10);
    rec.add("second order: symmetric part is constant", "< 1e-10", below(worst_77, 1e-10), worst_77 < 1e-10);
    rec.add("second order: closed form for y", "< 1e-10", below(worst_78, 1e-10), worst_78 < 1e-10);
    rec.add("third order: diagonal and symmetric parts vanish", "< 1e-10", below(worst_z, 1e-10), worst_z < 1e-10);
    rec.add("gauge conditions", "<= 1e-12", sci(worst_gauge), worst_gauge <= 1e-12);
    rec.add("convergence order of the order-3 truncation", "p in [3.5, 4.5]",
            all_fit ? "p in [" + rounded(p_lo, 3) + ", " + rounded(p_hi, 3) + "]" : "unbounded for some seed",
            all_fit && p_lo >= 3.5 && p_hi <= 4.5);

    const std::vector<double> xs{0.3, 1.0, 2.0, kPi};
    std::string affine;
    bool affine_ok = true;
    for (auto d : {AffineDirection::I, AffineDirection::II, AffineDirection::III, AffineDirection::IV, AffineDirection::V}) {
        const bool ok = affine_direction_check(d, xs);
        const ExpansionReport r = dita_expand(affine_seed(d, 0.3), 3);
        const bool flat = !r.convergence_order.has_value() && r.y_common == 0.0 && r.stages[1].solution.x.isZero(1e-14) &&
                          r.stages[2].solution.x.isZero(1e-14);
        affine += (affine.empty() ? "" : " ") + affine_direction_name(d) + (ok && flat ? ":exact" : ":broken");
        affine_ok = affine_ok && ok && flat;
    }
    rec.add("affine directions i-v exact up to x = pi, y = z = 0", "i:exact ii:exact iii:exact iv:exact v:exact",
            affine, affine_ok);
    const bool generic = affine_direction_check(ExpansionSeed{1.0, 0.3, 0.2, 0.0}, {0.5});
    rec.add("generic direction (1,0.3,0.2,0) is not affine", "false", generic ? "true" : "false", !generic);

    const HermitianMatch h = match_hermitian_direction(0.01);
    rec.add("direction (-x,-x,2x,x) matches B(theta) at x = 0.01", "equivalent at 1e-6",
            h.equivalent ? "equivalent to B(" + rounded(h.theta, 6) + (h.branch > 0 ? ",+)" : ",-)") : "no match",
            h.equivalent, json{{"theta", h.theta}, {"branch", h.branch}, {"invariant_distance", h.invariant_distance}});
    return rec.take();
}

std::vector<ClaimResult> section_s4(const RunConfig& cfg) {
    Recorder rec("s4-average");
    for (int n : {2, 3, 6}) {
        const Estimate e = average_distance_estimate(n, cfg.average_samples, cfg.seed, cfg.workers);
        const double target = static_cast<double>(n) / (n + 1);
        const double z = std::abs(e.mean - target) / e.std_error;
        rec.add("mean D2 to a Haar-random basis, N=" + std::to_string(n), rounded(target, 4) + " within 4 s.e.",
                rounded(e.mean, 4) + " +- " + rounded(e.std_error, 4) + " (" + rounded(z, 2) + " s.e.)", z <= 4.0,
                json{{"mean", e.mean}, {"std_error", e.std_error}, {"samples", e.samples}});
    }
    const RandomSetScan s = random_set_scan(6, cfg.scan_bases, cfg.seed, cfg.workers);
    const json raw{{"bases", s.bases},
                   {"best_min_distance_4", s.best_min_distance_4},
                   {"best_min_distance_7", s.best_min_distance_7},
                   {"context_20M_samples", {{"four", 0.91}, {"seven", 0.86}}}};
    rec.add("best 4-set min D2 in a random scan", "< 1 - 1e-6 (0.91 seen over 20M)", rounded(s.best_min_distance_4, 4),
            s.best_min_distance_4 <= 1.0 - 1e-6, raw);
    rec.add("best 7-set min D2 in a random scan", "< 1 - 1e-6 (0.86 seen over 20M)", rounded(s.best_min_distance_7, 4),
            s.best_min_distance_7 <= 1.0 - 1e-6, raw);
    return rec.take();
}

// Residual of the certified reconstruction h1 = D1 P1 h2 P2 D2, or infinity without a witness.
double witness_residual(const BasisMatrix& h1, const BasisMatrix& h2) {
    const auto w = are_equivalent(h1, h2);
    return w ? max_abs_diff(w->apply(h2.entries()), h1.entries()) : INFINITY;
}

std::vector<ClaimResult> section_equivalences(const RunConfig& cfg) {
    Recorder rec("equivalences");
    constexpr double kWitnessTol = 1e-9;
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::pair<double, double>> points;
    for (int i = 0; i < 5; ++i) points.emplace_back(unit(rng), unit(rng));
    const auto fourier = [](double a, double b) {
        return build(FamilySpec::fourier(PhaseValue::from_turn(a), PhaseValue::from_turn(b)));
    };
    const auto fourier_t = [](double a, double b) {
        return build(FamilySpec::fourier_transposed(PhaseValue::from_turn(a), PhaseValue::from_turn(b)));
    };
    const auto dita = [](double x) { return build(FamilySpec::dita(PhaseValue::from_turn(x))); };

    // Each check reports the worst witness residual over its sample points.
    const auto check = [&](const std::string& claim, const std::vector<std::pair<BasisMatrix, BasisMatrix>>& pairs) {
        double worst = 0.0;
        for (const auto& [a, b] : pairs) worst = std::max(worst, witness_residual(a, b));
        const bool pass = worst <= kWitnessTol;
        rec.add(claim, "witness for every sample", pass ? "max residual " + sci(worst) : "no witness",
                pass, json{{"samples", pairs.size()}, {"max_residual", std::isfinite(worst) ? json(worst) : json(nullptr)}});
    };
    const auto fourier_images = [&](double s1, double s2, double m11, double m12, double m21, double m22) {
        std::vector<std::pair<BasisMatrix, BasisMatrix>> pairs;
        for (const auto& [a, b] : points) pairs.emplace_back(fourier(a, b), fourier(m11 * a + m12 * b + s1, m21 * a + m22 * b + s2));
        return pairs;
    };
    check("F(x1,x2) ~ F(x1+2/6,x2+1/6)", fourier_images(2.0 / 6, 1.0 / 6, 1, 0, 0, 1));
    check("F(x1,x2) ~ F(x1+4/6,x2+2/6)", fourier_images(4.0 / 6, 2.0 / 6, 1, 0, 0, 1));
    check("F(x1,x2) ~ F(x1,x2+1/2)", fourier_images(0, 0.5, 1, 0, 0, 1));
    check("F(x1,x2) ~ F(x1+1/6,x2+2/6)", fourier_images(1.0 / 6, 2.0 / 6, 1, 0, 0, 1));
    check("F(x1,x2) ~ F(x1+2/6,x2+4/6)", fourier_images(2.0 / 6, 4.0 / 6, 1, 0, 0, 1));
    check("F(x1,x2) ~ F(x1+1/2,x2)", fourier_images(0.5, 0, 1, 0, 0, 1));
    check("F(x1,x2) ~ F(x2,x1)", fourier_images(0, 0, 0, 1, 1, 0));
    check("F(x1,x2) ~ F(-x1,-x2)", fourier_images(0, 0, -1, 0, 0, -1));
    check("F(x1,x2) ~ F(x2-x1,-x1)", fourier_images(0, 0, -1, 1, -1, 0));
    check("F(x1,x2) ~ F(-x2,x1-x2)", fourier_images(0, 0, 0, -1, 1, -1));

    // Third step of each order-6 translation cycle; the reflections F(x1,-x2) and
    // F(-x1,x2) written in that position are not equivalences.
    {
        bool any = false;
        for (const auto& [a, b] : points)
            any = any || are_equivalent(fourier(a, b), fourier(a, -b)) || are_equivalent(fourier(a, b), fourier(-a, b));
        rec.add("reflections F(x1,-x2), F(-x1,x2)", "no witness at generic points", any ? "witness found" : "no witness",
                !any);
    }

    std::vector<std::pair<BasisMatrix, BasisMatrix>> d_half, d_reflect, d_dagger, f_dagger;
    for (const auto& [a, b] : points) {
        const double x = a / 4.0 - 0.125;
        d_half.emplace_back(dita(x), dita(x + 0.5));
        d_reflect.emplace_back(dita(x), dita(0.25 - x));
        d_dagger.emplace_back(dita(x).adjoint(), dita(-x));
        f_dagger.emplace_back(fourier(a, b).adjoint(), fourier_t(a, b));
    }
    check("D(x) ~ D(x+1/2)", d_half);
    check("D(x) ~ D(-x+1/4)", d_reflect);
    check("F(x1,x2)^dagger ~ FT(x1,x2)", f_dagger);
    check("D(x)^dagger ~ D(-x)", d_dagger);
    const BasisMatrix c = build(FamilySpec::bjorck());
    check("C^dagger ~ C", {{c.adjoint(), c}});
    check("S^dagger ~ S", {{tao().adjoint(), tao()}});

    // Hermitian family: endpoints and y = dbar^2, d^2 against C or its conjugate,
    // y = -1, +i, -i against D(0); both square-root branches.
    const cplx d = PhaseValue::special(Special::d).realize();
    const BasisMatrix c_bar = c.conjugate();
    const auto bjorck_residual = [&](const BasisMatrix& h) {
        return std::min(witness_residual(h, c), witness_residual(h, c_bar));
    };
    const auto hermitian_check = [&](const std::string& claim, const std::vector<cplx>& ys, const auto& residual_of) {
        double worst = 0.0;
        for (const cplx y : ys)
            for (int branch : {+1, -1}) worst = std::max(worst, residual_of(hermitian_from_y(y, branch)));
        const bool pass = worst <= kWitnessTol;
        rec.add(claim, "witness for both branches", pass ? "max residual " + sci(worst) : "no witness", pass,
                json{{"max_residual", std::isfinite(worst) ? json(worst) : json(nullptr)}});
    };
    hermitian_check("B at y = -dbar, -d ~ C or Cbar", {-std::conj(d), -d}, bjorck_residual);
    hermitian_check("B at y = dbar^2, d^2 ~ C or Cbar", {std::conj(d * d), d * d}, bjorck_residual);
    const BasisMatrix d0 = dita(0.0);
    hermitian_check("B at y = -1, i, -i ~ D(0)", {cplx(-1, 0), cplx(0, 1), cplx(0, -1)},
                    [&](const BasisMatrix& h) { return witness_residual(h, d0); });
    return rec.take();
}

std::vector<ClaimResult> section_roots357(const RunConfig& cfg) {
    Recorder rec("roots-357");
    const ScanOptions opts = scan_options(cfg);
    const auto three = enumerate_hadamard_bases(SearchAlphabet(3), cfg.tol, opts);
    std::vector<std::string> labels;
    for (const auto& c : three) labels.push_back(c.label + " x" + std::to_string(c.members));
    const bool only_s = three.size() == 1 && three.front().label == "S";
    rec.add("Hadamard bases over 3rd roots", "nonempty, all ~ S", join(labels), only_s);
    for (int n : {5, 7}) {
        const auto found = enumerate_dephased_hadamards(SearchAlphabet(n), cfg.tol, opts);
        rec.add("Hadamard bases over " + std::to_string(n) + "th roots", "none", std::to_string(found.size()),
                found.empty());
    }
    return rec.take();
}

}  // namespace

ReportFormat report_format_from_name(const std::string& name) {
    if (name == "json") return ReportFormat::Json;
    if (name == "csv") return ReportFormat::Csv;
    if (name == "text") return ReportFormat::Text;
    throw InvalidInput("format must be json, csv or text: " + name);
}

void RunConfig::validate() const {
    tol.validate();
    if (budget == 0) throw InvalidInput("budget must be positive");
    if (average_samples < 2) throw InvalidInput("average sample count must be at least 2");
}

const std::vector<std::string>& reproduce_sections() {
    static const std::vector<std::string> s{"s5-12", "s5-24", "s6", "s7-b1", "s7-b2", "s8", "s4-average", "roots-357",
                                              "equivalences"};
    return s;
}

std::vector<ClaimResult> reproduce_section(const std::string& section, const RunConfig& config) {
    config.validate();
    if (section == "s5-12") return section_s5(12, config);
    if (section == "s5-24") return section_s5(24, config);
    if (section == "s6") return section_s6(config);
    if (section == "s7-b1") return section_s7(Special::b1, config);
    if (section == "s7-b2") return section_s7(Special::b2, config);
    if (section == "s8") return section_s8(config);
    if (section == "s4-average") return section_s4(config);
    if (section == "roots-357") return section_roots357(config);
    if (section == "equivalences") return section_equivalences(config);
    throw InvalidInput("unknown section: " + section);
}

json claims_to_json(const std::vector<ClaimResult>& claims, bool with_runtimes) {
    json out = json::array();
    for (const auto& c : claims) {
        json j{{"section", c.section}, {"claim", c.claim},   {"expected", c.expected},
               {"observed", c.observed}, {"pass", c.pass}, {"raw", c.raw}};
        if (with_runtimes) j["seconds"] = c.seconds;
        out.push_back(std::move(j));
    }
    return out;
}

std::string rounded(double value, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, value);
    std::string s = buf;
    if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
    return s;
}

}  // namespace hmk
