// Exhaustive searches over phase alphabets: unbiased vectors, orthonormal bases,
// dephased Hadamard matrices, and the triplet structure of MUB pairs (1, H).
#pragma once

#include "hmk/basis.hpp"
#include "hmk/catalog.hpp"
#include "hmk/equivalence.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace hmk {

/// Symbols exp(2πi k/n) times s^p for each extra constant s and 0 < |p| <= extra_power.
/// Conjugates of the extras are always included.
class SearchAlphabet {
public:
    explicit SearchAlphabet(int root_order, std::vector<Special> extras = {}, int extra_power = 1);

    /// "roots:12", "roots:24,b2", "roots:12,d^2" (the exponent sets extra_power).
    static SearchAlphabet parse(const std::string& text);

    int root_order() const { return root_order_; }
    const std::vector<Special>& extras() const { return extras_; }
    int extra_power() const { return extra_power_; }
    std::size_t size() const { return symbols_.size(); }
    const std::vector<PhaseValue>& symbols() const { return symbols_; }
    const std::vector<cplx>& values() const { return values_; }
    std::string descriptor() const;

    /// Symbol indices whose angle lies within `window` radians of arg(u).
    void lookup(cplx u, double window, std::vector<int>& out) const;
    /// Smallest angular gap between two symbols (radians).
    double min_separation() const { return min_separation_; }

private:
    int root_order_;
    std::vector<Special> extras_;
    int extra_power_;
    std::vector<PhaseValue> symbols_;
    std::vector<cplx> values_;
    std::vector<std::pair<double, int>> by_angle_;
    double min_separation_ = 0.0;
};

/// Length-N vector of alphabet symbols with first entry 1; unnormalized entries are unimodular.
struct PhaseVector {
    std::vector<int> symbols;
    std::vector<PhaseValue> entries;

    /// Entries divided by sqrt N.
    CVector normalized() const;
    friend bool operator==(const PhaseVector& a, const PhaseVector& b) { return a.symbols == b.symbols; }
};

/// |Σ_a coeffs[a] v_a|^2 = target.
struct VectorConstraint {
    std::vector<cplx> coeffs;
    double target = 0.0;
};

struct ScanOptions {
    int workers = 0;                   // < 1: all hardware threads
    std::uint64_t budget = 1000000000;  // cap on enumerated prefixes
    bool progress = false;              // per-block progress on stderr
    std::string checkpoint;             // resume file for vector scans (empty: none)
};

/// Counters and the empirical separation between accepted and rejected candidates.
/// Deviations are measured on sums of N unimodular terms, | |Σ_a c_a v_a|^2 - target |,
/// i.e. N^2 times the deviation of the normalized squared overlap.
struct ScanStats {
    std::uint64_t prefixes = 0;
    std::size_t found = 0;
    double max_accepted = 0.0;
    double min_rejected = 1e300;

    void merge(const ScanStats& o);
};

/// Every vector over the alphabet with first entry 1 satisfying all constraints to `tol`,
/// in lexicographic symbol order. The last coordinate is solved from the first
/// non-degenerate constraint and looked up in the alphabet, so the work is about
/// |alphabet|^(N-2) prefixes; SearchTooLarge is thrown when that exceeds the budget.
std::vector<PhaseVector> scan_vectors(int n, const SearchAlphabet& alphabet, const std::vector<VectorConstraint>& constraints,
                                      double tol, const ScanOptions& opts = {}, ScanStats* stats = nullptr);

/// Constraints |<h_c|v>|^2 = 1/N for each column of each reference; monomial
/// references (identity up to permutation and phases) are skipped.
std::vector<VectorConstraint> unbiased_constraints(const std::vector<BasisMatrix>& references);

std::vector<PhaseVector> enumerate_unbiased_vectors(const std::vector<BasisMatrix>& references,
                                                    const SearchAlphabet& alphabet, const Tolerances& tol = {},
                                                    const ScanOptions& opts = {}, ScanStats* stats = nullptr);

/// All mutually orthogonal N-sets of the vectors, columns in lexicographic order.
std::vector<BasisMatrix> assemble_bases(const std::vector<PhaseVector>& vectors, const Tolerances& tol = {},
                                        ScanStats* stats = nullptr);

/// Dephased Hadamard matrices over the alphabet, up to permutations of rows and
/// columns: the first column is all ones and one further column has
/// non-decreasing symbols. Every equivalence class with a dephased alphabet
/// representative appears at least once.
std::vector<BasisMatrix> enumerate_dephased_hadamards(const SearchAlphabet& alphabet, const Tolerances& tol = {},
                                                      const ScanOptions& opts = {}, ScanStats* stats = nullptr);

/// Names matrices by equivalence to catalog members whose parameters come from the alphabet.
/// Preference order: F, FT, D, C, Cbar, S.
class Labeler {
public:
    struct Entry {
        std::string label;
        BasisMatrix matrix;
    };

    explicit Labeler(const SearchAlphabet& alphabet, double tol = 1e-9);
    /// First catalog entry equivalent to h, if any.
    const Entry* match(const BasisMatrix& h) const;
    const std::vector<Entry>& entries() const { return entries_; }

private:
    std::vector<Entry> entries_;
    std::vector<HaagerupInvariant> invariants_;
    double tol_;
};

struct HadamardClass {
    BasisMatrix representative;  // catalog matrix when labelled, else the first found member
    std::string label;           // "?" when no catalog member matches
    std::size_t members = 0;
};

/// Groups matrices into equivalence classes in order of first appearance.
std::vector<HadamardClass> classify(const std::vector<BasisMatrix>& found, const Labeler& labeler, double tol = 1e-9);

std::vector<HadamardClass> enumerate_hadamard_bases(const SearchAlphabet& alphabet, const Tolerances& tol = {},
                                                    const ScanOptions& opts = {});

struct TripletReport {
    std::string pair_label;
    BasisMatrix mub1;
    std::size_t vectors = 0;
    std::vector<BasisMatrix> candidates;
    std::vector<std::string> candidate_labels;
    Eigen::MatrixXd distances;  // chordal distance squared between candidates
    double max_offdiag = 0.0;
    bool quartet_found = false;
    ScanStats vector_stats;
    ScanStats basis_stats;
};

/// Unbiased vectors to (1, mub1), candidate bases, labels and the distance table.
TripletReport triplet_search(const BasisMatrix& mub1, const SearchAlphabet& alphabet, const Tolerances& tol = {},
                             const ScanOptions& opts = {}, const Labeler* labeler = nullptr);

struct SurveyEntry {
    std::string label;
    std::size_t class_size = 0;
    TripletReport report;
};

struct SurveyReport {
    std::string alphabet;
    std::size_t hadamard_count = 0;
    std::vector<SurveyEntry> entries;  // one per inequivalent (MUB)_1

    /// Entries with at least one candidate.
    std::vector<const SurveyEntry*> extendable() const;
};

SurveyReport survey(const SearchAlphabet& alphabet, const Tolerances& tol = {}, const ScanOptions& opts = {});

}  // namespace hmk
