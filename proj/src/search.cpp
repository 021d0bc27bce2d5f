#include "hmk/search.hpp"

#include "hmk/errors.hpp"
#include "hmk/geometry.hpp"
#include "hmk/parallel.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>

namespace hmk {

// ---------------------------------------------------------------------------
// alphabet

SearchAlphabet::SearchAlphabet(int root_order, std::vector<Special> extras, int extra_power)
    : root_order_(root_order), extras_(std::move(extras)), extra_power_(extra_power) {
    if (root_order_ < 1) throw InvalidInput("alphabet: root order must be positive");
    if (extra_power_ < 1) throw InvalidInput("alphabet: extra power must be positive");
    std::sort(extras_.begin(), extras_.end());
    extras_.erase(std::unique(extras_.begin(), extras_.end()), extras_.end());

    for (int k = 0; k < root_order_; ++k) symbols_.push_back(PhaseValue::root(k, root_order_));
    for (Special s : extras_)
        for (int p = 1; p <= extra_power_; ++p)
            for (int sign : {+1, -1})
                for (int k = 0; k < root_order_; ++k)
                    symbols_.push_back(PhaseValue::special(s, sign * p, TurnFraction(k, root_order_)));

    values_.reserve(symbols_.size());
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
        values_.push_back(symbols_[i].realize());
        by_angle_.emplace_back(kTwoPi * symbols_[i].turn(), static_cast<int>(i));
    }
    std::sort(by_angle_.begin(), by_angle_.end());
    min_separation_ = kTwoPi;
    for (std::size_t i = 0; i < by_angle_.size(); ++i) {
        const double next = i + 1 < by_angle_.size() ? by_angle_[i + 1].first : by_angle_[0].first + kTwoPi;
        if (by_angle_.size() > 1) min_separation_ = std::min(min_separation_, next - by_angle_[i].first);
    }
    if (min_separation_ < 1e-9) throw InvalidInput("alphabet: two symbols coincide numerically");
}

SearchAlphabet SearchAlphabet::parse(const std::string& text) {
    std::stringstream ss(text);
    std::string part;
    int order = 0;
    int power = 1;
    std::vector<Special> extras;
    bool first = true;
    while (std::getline(ss, part, ',')) {
        if (first) {
            first = false;
            const std::string prefix = "roots:";
            if (part.rfind(prefix, 0) != 0) throw ParseError("alphabet must start with 'roots:': '" + text + "'");
            try {
                std::size_t used = 0;
                order = std::stoi(part.substr(prefix.size()), &used);
                if (used != part.size() - prefix.size()) throw std::invalid_argument(part);
            } catch (const std::logic_error&) {
                throw ParseError("bad root order in alphabet '" + text + "'");
            }
            continue;
        }
        std::string name = part;
        const auto caret = part.find('^');
        if (caret != std::string::npos) {
            name = part.substr(0, caret);
            try {
                power = std::max(power, std::stoi(part.substr(caret + 1)));
            } catch (const std::logic_error&) {
                throw ParseError("bad exponent in alphabet '" + text + "'");
            }
        }
        const auto s = special_from_name(name);
        if (!s) throw ParseError("unknown alphabet extra '" + name + "'");
        extras.push_back(*s);
    }
    if (first) throw ParseError("empty alphabet");
    return SearchAlphabet(order, extras, power);
}

std::string SearchAlphabet::descriptor() const {
    std::string s = "roots:" + std::to_string(root_order_);
    for (Special e : extras_) {
        s += "," + special_name(e);
        if (extra_power_ > 1) s += "^" + std::to_string(extra_power_);
    }
    return s;
}

void SearchAlphabet::lookup(cplx u, double window, std::vector<int>& out) const {
    out.clear();
    double a = std::atan2(u.imag(), u.real());
    if (a < 0) a += kTwoPi;
    const auto scan = [&](double lo, double hi) {
        auto it = std::lower_bound(by_angle_.begin(), by_angle_.end(), std::make_pair(lo, -1));
        for (; it != by_angle_.end() && it->first <= hi; ++it) out.push_back(it->second);
    };
    scan(a - window, a + window);
    if (a - window < 0) scan(a - window + kTwoPi, kTwoPi);
    if (a + window >= kTwoPi) scan(0.0, a + window - kTwoPi);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
}

CVector PhaseVector::normalized() const {
    CVector v(static_cast<Eigen::Index>(entries.size()));
    const double s = 1.0 / std::sqrt(static_cast<double>(entries.size()));
    for (std::size_t i = 0; i < entries.size(); ++i) v(static_cast<Eigen::Index>(i)) = s * entries[i].realize();
    return v;
}

void ScanStats::merge(const ScanStats& o) {
    prefixes += o.prefixes;
    found += o.found;
    max_accepted = std::max(max_accepted, o.max_accepted);
    min_rejected = std::min(min_rejected, o.min_rejected);
}

// ---------------------------------------------------------------------------
// vector scan

namespace {

struct ScanProblem {
    int n;
    const SearchAlphabet& alphabet;
    std::size_t m;                          // number of constraints
    std::vector<std::vector<cplx>> term;    // term[c][a * A + s] = coeff_c[a] * symbol_s
    std::vector<double> target;
    std::vector<double> root_target;
    double tol;
    double scale;                           // 1 / N^2
};

class ScanTask {
public:
    ScanTask(const ScanProblem& p) : p_(p), sums_(static_cast<std::size_t>(p.n) * p.m), symbols_(static_cast<std::size_t>(p.n), 0) {}

    // Enumerates every vector whose coordinate 1 is `first` (or the whole space when N < 3).
    void run(int first) {
        const std::size_t A = p_.alphabet.size();
        for (std::size_t c = 0; c < p_.m; ++c) sums_[c] = p_.term[c][0];  // coordinate 0 is symbol 0 = 1
        symbols_[0] = 0;
        if (p_.n == 1) {
            emit_checked(0);
            return;
        }
        if (p_.n == 2) {
            solve_last();
            return;
        }
        (void)A;
        if (!assign(1, first)) return;
        descend(2);
    }

    std::vector<PhaseVector> results;
    ScanStats stats;

private:
    const ScanProblem& p_;
    std::vector<cplx> sums_;  // sums_[depth * m + c] after coordinates 0..depth assigned
    std::vector<int> symbols_;
    std::vector<int> lookup_;

    // assigns coordinate k and checks feasibility; remaining = n - 1 - k coordinates left
    bool assign(int k, int s) {
        symbols_[static_cast<std::size_t>(k)] = s;
        const std::size_t A = p_.alphabet.size();
        const double remaining = p_.n - 1 - k;
        for (std::size_t c = 0; c < p_.m; ++c) {
            const cplx v = sums_[static_cast<std::size_t>(k - 1) * p_.m + c] +
                           p_.term[c][static_cast<std::size_t>(k) * A + static_cast<std::size_t>(s)];
            sums_[static_cast<std::size_t>(k) * p_.m + c] = v;
            if (std::abs(std::abs(v) - p_.root_target[c]) > remaining + 1e-9) return false;
        }
        return true;
    }

    void descend(int k) {
        if (k == p_.n - 1) {
            ++stats.prefixes;
            solve_last();
            return;
        }
        const int A = static_cast<int>(p_.alphabet.size());
        for (int s = 0; s < A; ++s)
            if (assign(k, s)) descend(k + 1);
    }

    void solve_last() {
        const int last = p_.n - 1;
        const std::size_t A = p_.alphabet.size();
        const cplx* sums = &sums_[static_cast<std::size_t>(last - 1) * p_.m];
        std::size_t pick = p_.m;
        double best = 1e-6;
        for (std::size_t c = 0; c < p_.m; ++c)
            if (std::abs(sums[c]) > best) {
                best = std::abs(sums[c]);
                pick = c;
            }
        if (pick == p_.m) {
            for (int s = 0; s < static_cast<int>(A); ++s) emit_checked(s);
            return;
        }
        const cplx S = sums[pick];
        const double s = std::abs(S);
        const cplx alpha = p_.term[pick][static_cast<std::size_t>(last) * A] / p_.alphabet.values()[0];
        const double kappa = (p_.target[pick] - 1.0 - s * s) / 2.0;
        double cosd = kappa / s;
        if (std::abs(cosd) > 1.0 + 1e-7) return;
        const bool tangent = std::abs(cosd) > 1.0 - 1e-6;
        cosd = std::clamp(cosd, -1.0, 1.0);
        const double delta = std::acos(cosd);
        const double psi = std::arg(S);
        const double window = tangent ? 1e-3 : 1e-6;
        std::vector<int> hits;
        for (double sign : {+1.0, -1.0}) {
            const cplx u = std::polar(1.0, psi + sign * delta) * std::conj(alpha);
            p_.alphabet.lookup(u, window, lookup_);
            hits.insert(hits.end(), lookup_.begin(), lookup_.end());
            if (delta == 0.0) break;
        }
        std::sort(hits.begin(), hits.end());
        hits.erase(std::unique(hits.begin(), hits.end()), hits.end());
        for (int h : hits) emit_checked(h);
    }

    void emit_checked(int s) {
        const int last = p_.n - 1;
        const std::size_t A = p_.alphabet.size();
        double worst = 0.0;
        for (std::size_t c = 0; c < p_.m; ++c) {
            cplx v;
            if (last == 0)
                v = p_.term[c][0];
            else
                v = sums_[static_cast<std::size_t>(last - 1) * p_.m + c] +
                    p_.term[c][static_cast<std::size_t>(last) * A + static_cast<std::size_t>(s)];
            worst = std::max(worst, std::abs(std::norm(v) - p_.target[c]) * p_.scale);
        }
        // stats are kept on the unimodular scale, tolerance on the normalized one
        if (worst > p_.tol) {
            stats.min_rejected = std::min(stats.min_rejected, worst / p_.scale);
            return;
        }
        stats.max_accepted = std::max(stats.max_accepted, worst / p_.scale);
        if (last > 0) symbols_[static_cast<std::size_t>(last)] = s;
        PhaseVector v;
        v.symbols = symbols_;
        for (int idx : v.symbols) v.entries.push_back(p_.alphabet.symbols()[static_cast<std::size_t>(idx)]);
        results.push_back(std::move(v));
        ++stats.found;
    }
};

std::string scan_key(int n, const SearchAlphabet& alphabet, const std::vector<VectorConstraint>& constraints, double tol) {
    std::ostringstream os;
    os.precision(10);
    os << "n=" << n << ";" << alphabet.descriptor() << ";tol=" << tol;
    double digest = 0.0;
    int i = 1;
    for (const auto& c : constraints) {
        for (const auto& z : c.coeffs) digest += (i++ % 97) * (z.real() + 0.5 * z.imag());
        digest += c.target;
    }
    os << ";m=" << constraints.size() << ";digest=" << digest;
    return os.str();
}

struct Checkpoint {
    std::string path;
    std::string key;
    nlohmann::json done = nlohmann::json::object();

    void load() {
        if (path.empty()) return;
        std::ifstream in(path);
        if (!in) return;
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception&) {
            return;
        }
        if (j.value("key", std::string{}) == key && j.contains("done")) done = j["done"];
    }

    void save() const {
        if (path.empty()) return;
        const std::string tmp = path + ".tmp";
        {
            std::ofstream out(tmp);
            out << nlohmann::json{{"key", key}, {"done", done}}.dump();
        }
        std::rename(tmp.c_str(), path.c_str());
    }
};

}  // namespace

std::vector<PhaseVector> scan_vectors(int n, const SearchAlphabet& alphabet, const std::vector<VectorConstraint>& constraints,
                                      double tol, const ScanOptions& opts, ScanStats* stats_out) {
    if (n < 1) throw InvalidInput("scan: dimension must be positive");
    const std::size_t A = alphabet.size();
    for (const auto& c : constraints)
        if (static_cast<int>(c.coeffs.size()) != n) throw InvalidInput("scan: constraint length differs from N");

    const double free_coords = constraints.empty() ? n - 1 : std::max(0, n - 2);
    const double nominal = std::pow(static_cast<double>(A), free_coords);
    if (nominal > static_cast<double>(opts.budget))
        throw SearchTooLarge("search needs about " + std::to_string(nominal) + " prefixes, budget is " +
                             std::to_string(opts.budget));

    ScanProblem p{n, alphabet, constraints.size(), {}, {}, {}, tol, 1.0 / (static_cast<double>(n) * n)};
    for (const auto& c : constraints) {
        std::vector<cplx> t(static_cast<std::size_t>(n) * A);
        for (int a = 0; a < n; ++a)
            for (std::size_t s = 0; s < A; ++s) t[static_cast<std::size_t>(a) * A + s] = c.coeffs[static_cast<std::size_t>(a)] * alphabet.values()[s];
        p.term.push_back(std::move(t));
        p.target.push_back(c.target);
        p.root_target.push_back(std::sqrt(std::max(0.0, c.target)));
    }

    const std::size_t tasks = n >= 3 ? A : 1;
    std::vector<std::vector<PhaseVector>> parts(tasks);
    std::vector<ScanStats> part_stats(tasks);
    std::vector<char> skip(tasks, 0);

    Checkpoint ck{opts.checkpoint, scan_key(n, alphabet, constraints, tol)};
    ck.load();
    for (auto it = ck.done.begin(); it != ck.done.end(); ++it) {
        const std::size_t t = std::stoul(it.key());
        if (t >= tasks) continue;
        skip[t] = 1;
        const auto& rec = it.value();
        for (const auto& syms : rec["vectors"]) {
            PhaseVector v;
            v.symbols = syms.get<std::vector<int>>();
            for (int idx : v.symbols) v.entries.push_back(alphabet.symbols().at(static_cast<std::size_t>(idx)));
            parts[t].push_back(std::move(v));
        }
        part_stats[t].prefixes = rec["prefixes"].get<std::uint64_t>();
        part_stats[t].found = parts[t].size();
        part_stats[t].max_accepted = rec["max_accepted"].get<double>();
        part_stats[t].min_rejected = rec["min_rejected"].get<double>();
    }

    std::mutex io_mutex;
    std::size_t completed = 0;
    for (char s : skip) completed += s ? 1 : 0;
    parallel_for(tasks, opts.workers, [&](std::size_t t) {
        if (skip[t]) return;
        ScanTask task(p);
        task.run(static_cast<int>(t));
        parts[t] = std::move(task.results);
        part_stats[t] = task.stats;
        std::lock_guard lock(io_mutex);
        ++completed;
        if (!ck.path.empty()) {
            nlohmann::json vecs = nlohmann::json::array();
            for (const auto& v : parts[t]) vecs.push_back(v.symbols);
            ck.done[std::to_string(t)] = {{"vectors", vecs},
                                          {"prefixes", task.stats.prefixes},
                                          {"max_accepted", task.stats.max_accepted},
                                          {"min_rejected", task.stats.min_rejected}};
            ck.save();
        }
        if (opts.progress)
            std::cerr << "[scan " << alphabet.descriptor() << "] block " << completed << "/" << tasks << ", "
                      << parts[t].size() << " vectors\n";
    });

    std::vector<PhaseVector> out;
    ScanStats total;
    for (std::size_t t = 0; t < tasks; ++t) {
        total.merge(part_stats[t]);
        for (auto& v : parts[t]) out.push_back(std::move(v));
    }
    std::sort(out.begin(), out.end(), [](const PhaseVector& a, const PhaseVector& b) { return a.symbols < b.symbols; });
    if (stats_out) stats_out->merge(total);
    return out;
}

namespace {

bool is_monomial(const BasisMatrix& m) {
    const int n = m.dimension();
    for (int c = 0; c < n; ++c) {
        int big = 0;
        for (int r = 0; r < n; ++r) {
            const double a = std::abs(m(r, c));
            if (a > 1e-9 && std::abs(a - 1.0) > 1e-9) return false;
            if (a > 1e-9) ++big;
        }
        if (big != 1) return false;
    }
    return true;
}

}  // namespace

std::vector<VectorConstraint> unbiased_constraints(const std::vector<BasisMatrix>& references) {
    std::vector<VectorConstraint> out;
    for (const auto& ref : references) {
        if (is_monomial(ref)) continue;
        const int n = ref.dimension();
        const double root_n = std::sqrt(static_cast<double>(n));
        for (int c = 0; c < n; ++c) {
            VectorConstraint vc;
            vc.target = n;
            for (int a = 0; a < n; ++a) vc.coeffs.push_back(std::conj(ref(a, c)) * root_n);
            out.push_back(std::move(vc));
        }
    }
    return out;
}

std::vector<PhaseVector> enumerate_unbiased_vectors(const std::vector<BasisMatrix>& references,
                                                    const SearchAlphabet& alphabet, const Tolerances& tol,
                                                    const ScanOptions& opts, ScanStats* stats) {
    if (references.empty()) throw InvalidInput("enumerate_unbiased_vectors: no references");
    const int n = references.front().dimension();
    for (const auto& r : references)
        if (r.dimension() != n) throw InvalidInput("enumerate_unbiased_vectors: references differ in dimension");
    return scan_vectors(n, alphabet, unbiased_constraints(references), tol.unbiasedness, opts, stats);
}

// ---------------------------------------------------------------------------
// cliques

namespace {

using Bits = std::vector<std::uint64_t>;

struct Graph {
    std::size_t size = 0;
    std::size_t words = 0;
    std::vector<Bits> adj;

    explicit Graph(std::size_t n) : size(n), words((n + 63) / 64), adj(n, Bits((n + 63) / 64, 0)) {}
    void connect(std::size_t a, std::size_t b) {
        adj[a][b / 64] |= 1ull << (b % 64);
        adj[b][a / 64] |= 1ull << (a % 64);
    }
};

std::size_t popcount(const Bits& b) {
    std::size_t c = 0;
    for (auto w : b) c += static_cast<std::size_t>(__builtin_popcountll(w));
    return c;
}

// candidates: vertices greater than the last chosen one and adjacent to all chosen
void cliques(const Graph& g, Bits& candidates, std::vector<int>& chosen, std::size_t k,
             const std::function<void(const std::vector<int>&)>& emit) {
    if (chosen.size() == k) {
        emit(chosen);
        return;
    }
    if (popcount(candidates) < k - chosen.size()) return;
    for (std::size_t w = 0; w < g.words; ++w) {
        std::uint64_t word = candidates[w];
        while (word) {
            const int bit = __builtin_ctzll(word);
            word &= word - 1;
            const std::size_t v = w * 64 + static_cast<std::size_t>(bit);
            Bits next(g.words, 0);
            for (std::size_t x = w; x < g.words; ++x) next[x] = candidates[x] & g.adj[v][x];
            next[w] &= bit == 63 ? 0 : ~((2ull << bit) - 1);
            chosen.push_back(static_cast<int>(v));
            cliques(g, next, chosen, k, emit);
            chosen.pop_back();
        }
    }
}

double overlap_dev(const CVector& a, const CVector& b) { return std::norm(a.dot(b)); }

double unit_scale(const CVector& v) { return static_cast<double>(v.size()) * static_cast<double>(v.size()); }

Graph orthogonality_graph(const std::vector<CVector>& vs, double tol, ScanStats* stats) {
    Graph g(vs.size());
    if (vs.empty()) return g;
    const double scale = unit_scale(vs.front());
    for (std::size_t i = 0; i < vs.size(); ++i)
        for (std::size_t j = i + 1; j < vs.size(); ++j) {
            const double d = overlap_dev(vs[i], vs[j]);
            if (d <= tol) {
                g.connect(i, j);
                if (stats) stats->max_accepted = std::max(stats->max_accepted, d * scale);
            } else if (stats) {
                stats->min_rejected = std::min(stats->min_rejected, d * scale);
            }
        }
    return g;
}

BasisMatrix basis_from_columns(const std::vector<const PhaseVector*>& cols) {
    PhaseGrid g;
    g.dim = static_cast<int>(cols.size());
    g.cells.resize(cols.size() * cols.size());
    for (int c = 0; c < g.dim; ++c)
        for (int r = 0; r < g.dim; ++r) g.at(r, c) = cols[static_cast<std::size_t>(c)]->entries[static_cast<std::size_t>(r)];
    return BasisMatrix(std::move(g));
}

}  // namespace

std::vector<BasisMatrix> assemble_bases(const std::vector<PhaseVector>& vectors, const Tolerances& tol, ScanStats* stats) {
    if (vectors.empty()) return {};
    const std::size_t n = vectors.front().entries.size();
    std::vector<std::size_t> order(vectors.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return vectors[a].symbols < vectors[b].symbols; });
    std::vector<CVector> vs;
    for (std::size_t i : order) {
        if (vectors[i].entries.size() != n) throw InvalidInput("assemble_bases: vectors differ in length");
        vs.push_back(vectors[i].normalized());
    }
    const Graph g = orthogonality_graph(vs, tol.unbiasedness, stats);
    std::vector<BasisMatrix> out;
    Bits all(g.words, 0);
    for (std::size_t i = 0; i < vs.size(); ++i) all[i / 64] |= 1ull << (i % 64);
    std::vector<int> chosen;
    cliques(g, all, chosen, n, [&](const std::vector<int>& c) {
        std::vector<const PhaseVector*> cols;
        for (int i : c) cols.push_back(&vectors[order[static_cast<std::size_t>(i)]]);
        out.push_back(basis_from_columns(cols));
    });
    if (stats) stats->found += out.size();
    return out;
}

std::vector<BasisMatrix> enumerate_dephased_hadamards(const SearchAlphabet& alphabet, const Tolerances& tol,
                                                      const ScanOptions& opts, ScanStats* stats) {
    constexpr int n = 6;
    VectorConstraint zero;
        zero.coeffs.assign(n, cplx{1.0, 0.0});
        zero.target = 0.0;
        ScanOptions scan_opts = opts;
        scan_opts.checkpoint.clear();
        const std::vector<PhaseVector> z = scan_vectors(n, alphabet, {zero}, tol.unbiasedness, scan_opts, stats);
        std::vector<CVector> zs;
        zs.reserve(z.size());
        for (const auto& v : z) zs.push_back(v.normalized());

        PhaseVector ones;
        ones.symbols.assign(n, 0);
        ones.entries.assign(n, PhaseValue::one());

        std::vector<std::size_t> sorted;
        for (std::size_t i = 0; i < z.size(); ++i)
            if (std::is_sorted(z[i].symbols.begin() + 1, z[i].symbols.end())) sorted.push_back(i);

        std::vector<std::vector<BasisMatrix>> parts(sorted.size());
        std::vector<ScanStats> part_stats(sorted.size());
        parallel_for(sorted.size(), opts.workers, [&](std::size_t t) {
            const std::size_t i = sorted[t];
            std::vector<std::size_t> nb;
            for (std::size_t j = i + 1; j < z.size(); ++j) {
                const double d = overlap_dev(zs[i], zs[j]);
                if (d <= tol.unbiasedness) {
                    nb.push_back(j);
                    part_stats[t].max_accepted = std::max(part_stats[t].max_accepted, d * unit_scale(zs[i]));
                } else {
                    part_stats[t].min_rejected = std::min(part_stats[t].min_rejected, d * unit_scale(zs[i]));
                }
            }
            if (nb.size() < n - 2) return;
            std::vector<CVector> local;
            for (std::size_t j : nb) local.push_back(zs[j]);
            const Graph g = orthogonality_graph(local, tol.unbiasedness, &part_stats[t]);
            Bits all(g.words, 0);
            for (std::size_t j = 0; j < nb.size(); ++j) all[j / 64] |= 1ull << (j % 64);
            std::vector<int> chosen;
            cliques(g, all, chosen, n - 2, [&](const std::vector<int>& c) {
                std::vector<const PhaseVector*> cols{&ones, &z[i]};
                for (int j : c) cols.push_back(&z[nb[static_cast<std::size_t>(j)]]);
                parts[t].push_back(basis_from_columns(cols));
            });
        });
        std::vector<BasisMatrix> out;
        for (std::size_t t = 0; t < parts.size(); ++t) {
            if (stats) {
                stats->max_accepted = std::max(stats->max_accepted, part_stats[t].max_accepted);
                stats->min_rejected = std::min(stats->min_rejected, part_stats[t].min_rejected);
            }
            for (auto& m : parts[t]) out.push_back(std::move(m));
        }
        return out;
}

// ---------------------------------------------------------------------------
// labels and classes

namespace {

std::string signed_label(const PhaseValue& x) {
    if (const auto* r = std::get_if<RationalRoot>(&x.kind())) {
        if (2 * r->turn.num() > r->turn.den()) return "-" + (-r->turn).str();
    }
    return x.turn_label();
}

bool same_point(const std::pair<PhaseValue, PhaseValue>& a, const std::pair<PhaseValue, PhaseValue>& b) {
    return std::abs(std::remainder(a.first.turn() - b.first.turn(), 1.0)) < 1e-12 &&
           std::abs(std::remainder(a.second.turn() - b.second.turn(), 1.0)) < 1e-12;
}

}  // namespace

Labeler::Labeler(const SearchAlphabet& alphabet, double tol) : tol_(tol) {
    std::vector<PhaseValue> turns;
    const int n = alphabet.root_order();
    for (int k = 0; k < n; ++k) turns.push_back(PhaseValue::root(k, n));
    for (Special s : alphabet.extras())
        for (int p = 1; p <= alphabet.extra_power(); ++p)
            for (int sign : {+1, -1})
                for (int k = 0; k < n; ++k) turns.push_back(PhaseValue::special(s, sign * p, TurnFraction(k, n)));

    std::vector<std::pair<PhaseValue, PhaseValue>> points;
    // one reduction per orbit: every orbit member is marked as seen
    const auto key = [](const PhaseValue& a, const PhaseValue& b) {
        const auto q = [](const PhaseValue& p) {
            const auto k = std::llround(p.turn() * 1e9);
            return k == 1000000000LL ? 0LL : static_cast<long long>(k);
        };
        return std::pair<long long, long long>(q(a), q(b));
    };
    std::set<std::pair<long long, long long>> seen;
    for (const auto& x1 : turns)
        for (const auto& x2 : turns) {
            if (seen.count(key(x1, x2))) continue;
            for (const auto& [o1, o2] : fourier_orbit(x1, x2)) seen.insert(key(o1, o2));
            auto r = reduce_fourier_params(x1, x2);
            if (std::none_of(points.begin(), points.end(), [&](const auto& p) { return same_point(p, r); }))
                points.push_back(std::move(r));
        }
    std::sort(points.begin(), points.end(), [](const auto& a, const auto& b) {
        const double a1 = a.first.turn() > 1 - 1e-12 ? 0 : a.first.turn();
        const double b1 = b.first.turn() > 1 - 1e-12 ? 0 : b.first.turn();
        if (std::abs(a1 - b1) > 1e-12) return a1 < b1;
        return signed_turn(a.second) < signed_turn(b.second);
    });
    for (const auto& [x1, x2] : points) {
        const auto spec = FamilySpec::fourier(x1, x2);
        entries_.push_back({spec.label(), build(spec).with_label(spec.label())});
    }
    for (const auto& [x1, x2] : points) {
        const auto spec = FamilySpec::fourier_transposed(x1, x2);
        entries_.push_back({spec.label(), build(spec).with_label(spec.label())});
    }
    std::vector<PhaseValue> dita;
    for (const auto& x : turns) {
        const PhaseValue r = reduce_dita_param(x);
        if (std::none_of(dita.begin(), dita.end(), [&](const PhaseValue& p) {
                return std::abs(std::remainder(p.turn() - r.turn(), 1.0)) < 1e-12;
            }))
            dita.push_back(r);
    }
    std::sort(dita.begin(), dita.end(), [](const PhaseValue& a, const PhaseValue& b) {
        const double sa = signed_turn(a), sb = signed_turn(b);
        if (std::abs(std::abs(sa) - std::abs(sb)) > 1e-12) return std::abs(sa) < std::abs(sb);
        return sa > sb;
    });
    for (const auto& x : dita) {
        const std::string label = "D(" + signed_label(x) + ")";
        entries_.push_back({label, build(FamilySpec::dita(x)).with_label(label)});
    }
    if (std::find(alphabet.extras().begin(), alphabet.extras().end(), Special::d) != alphabet.extras().end()) {
        entries_.push_back({"C", build(FamilySpec::bjorck())});
        entries_.push_back({"Cbar", build(FamilySpec::bjorck_conjugate())});
    }
    if (n % 3 == 0) entries_.push_back({"S", tao()});
    for (const auto& e : entries_) invariants_.push_back(HaagerupInvariant::of(e.matrix));
}

const Labeler::Entry* Labeler::match(const BasisMatrix& h) const {
    const HaagerupInvariant inv = HaagerupInvariant::of(h);
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (!inv.matches(invariants_[i])) continue;
        if (are_equivalent(h, entries_[i].matrix, tol_)) return &entries_[i];
    }
    return nullptr;
}

std::vector<HadamardClass> classify(const std::vector<BasisMatrix>& found, const Labeler& labeler, double tol) {
    std::vector<HadamardClass> classes;
    std::vector<BasisMatrix> firsts;
    std::vector<HaagerupInvariant> invariants;
    for (const auto& h : found) {
        const HaagerupInvariant inv = HaagerupInvariant::of(h);
        bool placed = false;
        for (std::size_t c = 0; c < classes.size() && !placed; ++c) {
            if (!inv.matches(invariants[c])) continue;
            if (are_equivalent(h, firsts[c], tol)) {
                ++classes[c].members;
                placed = true;
            }
        }
        if (placed) continue;
        HadamardClass cls;
        if (const auto* e = labeler.match(h)) {
            cls.representative = e->matrix.with_label(e->label);
            cls.label = e->label;
        } else {
            cls.representative = h.with_label("?");
            cls.label = "?";
        }
        cls.members = 1;
        classes.push_back(std::move(cls));
        firsts.push_back(h);
        invariants.push_back(inv);
    }
    return classes;
}

std::vector<HadamardClass> enumerate_hadamard_bases(const SearchAlphabet& alphabet, const Tolerances& tol,
                                                    const ScanOptions& opts) {
    const auto found = enumerate_dephased_hadamards(alphabet, tol, opts);
    if (found.empty()) return {};
    return classify(found, Labeler(alphabet));
}

// ---------------------------------------------------------------------------
// triplets and surveys

TripletReport triplet_search(const BasisMatrix& mub1, const SearchAlphabet& alphabet, const Tolerances& tol,
                             const ScanOptions& opts, const Labeler* labeler) {
    if (!is_hadamard(mub1, tol)) throw InvalidInput("triplet_search: first basis is not Hadamard");
    TripletReport r;
    r.pair_label = mub1.label();
    r.mub1 = mub1;
    const auto vectors = enumerate_unbiased_vectors({BasisMatrix::identity(mub1.dimension()), mub1}, alphabet, tol,
                                                    opts, &r.vector_stats);
    r.vectors = vectors.size();
    r.candidates = assemble_bases(vectors, tol, &r.basis_stats);
    for (const auto& c : r.candidates) {
        const Labeler::Entry* e = labeler ? labeler->match(c) : nullptr;
        r.candidate_labels.push_back(e ? e->label : "?");
    }
    const auto k = static_cast<Eigen::Index>(r.candidates.size());
    r.distances = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = i + 1; j < k; ++j) {
            const double d = chordal_distance_sq(r.candidates[static_cast<std::size_t>(i)], r.candidates[static_cast<std::size_t>(j)]);
            r.distances(i, j) = r.distances(j, i) = d;
            r.max_offdiag = std::max(r.max_offdiag, d);
        }
    r.quartet_found = r.max_offdiag >= 1.0 - 1e-6;
    return r;
}

std::vector<const SurveyEntry*> SurveyReport::extendable() const {
    std::vector<const SurveyEntry*> out;
    for (const auto& e : entries)
        if (!e.report.candidates.empty()) out.push_back(&e);
    return out;
}

SurveyReport survey(const SearchAlphabet& alphabet, const Tolerances& tol, const ScanOptions& opts) {
    SurveyReport report;
    report.alphabet = alphabet.descriptor();
    const auto found = enumerate_dephased_hadamards(alphabet, tol, opts);
    report.hadamard_count = found.size();
    if (found.empty()) return report;
    const Labeler labeler(alphabet);
    for (auto& cls : classify(found, labeler)) {
        SurveyEntry e;
        e.label = cls.label;
        e.class_size = cls.members;
        e.report = triplet_search(cls.representative, alphabet, tol, opts, &labeler);
        report.entries.push_back(std::move(e));
    }
    return report;
}

}  // namespace hmk
