// Command-line front end.
#include "hmk/catalog.hpp"
#include "hmk/defect.hpp"
#include "hmk/equivalence.hpp"
#include "hmk/errors.hpp"
#include "hmk/fourier.hpp"
#include "hmk/geometry.hpp"
#include "hmk/matrix_io.hpp"
#include "hmk/reproduce.hpp"
#include "hmk/search.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace hmk;

namespace {

struct Global {
    double tol_unitarity = 1e-10;
    double tol_unbiased = 1e-9;
    std::uint64_t budget = 1000000000;
    std::uint64_t seed = 1;
    std::string format = "json";
    int workers = 0;

    Tolerances tolerances() const {
        Tolerances t;
        t.unitarity = tol_unitarity;
        t.unbiasedness = tol_unbiased;
        t.validate();
        return t;
    }
    ScanOptions scan(bool progress = false, std::string checkpoint = {}) const {
        ScanOptions o;
        o.workers = workers;
        o.budget = budget;
        o.progress = progress;
        o.checkpoint = std::move(checkpoint);
        return o;
    }
    RunConfig config() const {
        RunConfig c;
        c.tol = tolerances();
        c.budget = budget;
        c.seed = seed;
        c.workers = workers;
        c.format = report_format_from_name(format);
        c.validate();
        return c;
    }
};

std::string cache_dir() {
    const char* d = std::getenv("HMK_CACHE_DIR");
    return d && *d ? std::string(d) : std::string();
}

// Loads a stored Tao matrix when one is present; `store` writes a fresh one.
void prepare_tao(bool store) {
    const std::string dir = cache_dir();
    if (dir.empty()) return;
    const fs::path file = fs::path(dir) / "tao.json";
    if (fs::exists(file)) {
        try {
            if (install_tao(read_matrix(file.string()))) return;
        } catch (const Error& e) {
            std::cerr << "ignoring cache " << file << ": " << e.what() << '\n';
        }
    }
    if (store) {
        fs::create_directories(dir);
        write_matrix(file.string(), tao());
    }
}

void write_text(const std::string& text, const std::string& out) {
    if (out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out);
    if (!f) throw Error(out + ": cannot open for writing");
    f << text;
}

std::string flat_text(const json& j, const std::string& prefix = {}) {
    std::string s;
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) s += flat_text(v, prefix.empty() ? k : prefix + "." + k);
    } else if (j.is_array() && !j.empty() && j.front().is_object()) {
        for (std::size_t i = 0; i < j.size(); ++i) s += flat_text(j[i], prefix + "[" + std::to_string(i) + "]");
    } else {
        s += (prefix.empty() ? std::string("value") : prefix) + ": " + (j.is_string() ? j.get<std::string>() : j.dump()) + "\n";
    }
    return s;
}

// JSON by default; text flattens the object; csv only where a command provides rows.
void emit(const Global& g, const json& j, const std::string& out, const std::string& csv = {}) {
    if (g.format == "json")
        write_text(j.dump(2) + "\n", out);
    else if (g.format == "text")
        write_text(flat_text(j), out);
    else if (g.format == "csv") {
        if (csv.empty()) throw InvalidInput("csv output is not available for this command");
        write_text(csv, out);
    } else {
        throw InvalidInput("format must be json, csv or text");
    }
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep))
        if (!item.empty()) out.push_back(item);
    return out;
}

json table_json(const Eigen::MatrixXd& d) {
    json out = json::array();
    for (Eigen::Index i = 0; i < d.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < d.cols(); ++j) row.push_back(d(i, j));
        out.push_back(std::move(row));
    }
    return out;
}

json vector_json(const PhaseVector& v) {
    json out = json::array();
    for (const auto& p : v.entries) out.push_back(p.turn_label());
    return out;
}

json stats_json(const ScanStats& s) {
    return json{{"prefixes", s.prefixes},
                {"found", s.found},
                {"max_accepted", s.max_accepted},
                {"min_rejected", s.min_rejected >= 1e300 ? json(nullptr) : json(s.min_rejected)}};
}

json triplet_json(const TripletReport& r, int digits) {
    json rounded_table = json::array();
    for (Eigen::Index i = 0; i < r.distances.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < r.distances.cols(); ++j) row.push_back(rounded(r.distances(i, j), digits));
        rounded_table.push_back(std::move(row));
    }
    json cands = json::array();
    for (const auto& c : r.candidates) cands.push_back(matrix_to_json(c));
    return json{{"pair", r.pair_label},
                {"vectors", r.vectors},
                {"candidates", r.candidates.size()},
                {"candidate_labels", r.candidate_labels},
                {"distances", table_json(r.distances)},
                {"distances_rounded", rounded_table},
                {"max_offdiag", r.max_offdiag},
                {"quartet_found", r.quartet_found},
                {"vector_stats", stats_json(r.vector_stats)},
                {"basis_stats", stats_json(r.basis_stats)},
                {"candidate_matrices", cands}};
}

SearchAlphabet make_alphabet(int roots, const std::vector<std::string>& extras, int power, bool big) {
    if (roots > 24 && !big) throw InvalidInput("alphabets beyond 24th roots need --big");
    std::string text = "roots:" + std::to_string(roots);
    for (const auto& e : extras) text += "," + e;
    SearchAlphabet a = SearchAlphabet::parse(text);
    if (power != 1) a = SearchAlphabet(a.root_order(), a.extras(), power);
    return a;
}

FamilySpec family_spec(const std::string& family, const std::string& params, double theta, bool theta_set, int branch,
                       int selector) {
    const auto f = family_from_name(family);
    if (!f) throw InvalidInput("unknown family: " + family + " (see 'catalog list')");
    std::vector<PhaseValue> phases;
    for (const auto& p : split(params, ',')) phases.push_back(PhaseValue::parse_turn_label(p));
    FamilySpec s = FamilySpec::make(*f, phases);
    if (*f == Family::Hermitian) {
        if (!phases.empty()) throw BadArity("hermitian takes --theta, not --params");
        if (!theta_set) throw BadArity("hermitian needs --theta");
        s.theta = theta;
        s.branch = branch;
    }
    if (*f == Family::DitaBlockCirculant) s.selector = selector;
    return s;
}

int run_reproduce(const Global& g, std::vector<std::string> sections, const std::string& out, bool timings) {
    prepare_tao(false);
    RunConfig cfg = g.config();
    cfg.output_path = out;
    if (sections.empty() || (sections.size() == 1 && sections.front() == "all")) sections = reproduce_sections();
    std::vector<ClaimResult> all;
    for (const auto& s : sections) {
        std::cerr << "running " << s << "...\n";
        auto claims = reproduce_section(s, cfg);
        for (const auto& c : claims)
            std::cerr << (c.pass ? "  PASS " : "  FAIL ") << c.claim << ": expected " << c.expected << ", observed "
                      << c.observed << " (" << rounded(c.seconds, 1) << " s)\n";
        all.insert(all.end(), claims.begin(), claims.end());
    }
    bool pass = true;
    std::vector<std::string> failed;
    for (const auto& c : all)
        if (!c.pass) {
            pass = false;
            failed.push_back(c.section + ": " + c.claim);
        }
    std::string csv = "section,claim,expected,observed,pass\n";
    const auto quote = [](const std::string& s) {
        std::string q = "\"";
        for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
        return q + "\"";
    };
    for (const auto& c : all)
        csv += quote(c.section) + "," + quote(c.claim) + "," + quote(c.expected) + "," + quote(c.observed) + "," +
               (c.pass ? "true" : "false") + "\n";
    const json bundle{{"sections", sections},
                      {"pass", pass},
                      {"failed", failed},
                      {"tolerances", {{"unitarity", cfg.tol.unitarity}, {"unbiasedness", cfg.tol.unbiasedness}}},
                      {"seed", cfg.seed},
                      {"claims", claims_to_json(all, timings)}};
    emit(g, bundle, out, csv);
    for (const auto& f : failed) std::cerr << "failed claim: " << f << '\n';
    return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Order-6 complex Hadamard matrices and mutually unbiased bases"};
    app.require_subcommand(1);
    app.fallthrough();
    Global g;
    app.add_option("--tol-unitarity", g.tol_unitarity, "max-norm bound on M†M - 1")->capture_default_str();
    app.add_option("--tol-unbiased", g.tol_unbiased, "bound on | |<e|f>|^2 - 1/N |")->capture_default_str();
    app.add_option("--budget", g.budget, "cap on enumerated search prefixes")->capture_default_str();
    app.add_option("--seed", g.seed, "random seed")->capture_default_str();
    app.add_option("--format", g.format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}))
        ->capture_default_str();
    app.add_option("--workers", g.workers, "worker threads (0: all hardware threads)")->capture_default_str();

    int exit_code = 0;

    // catalog
    auto* catalog = app.add_subcommand("catalog", "build known Hadamard matrices");
    catalog->require_subcommand(1);
    auto* cat_list = catalog->add_subcommand("list", "family names and parameter arities");
    auto* cat_build = catalog->add_subcommand("build", "write one family member as matrix JSON");
    std::string family, params, out;
    double theta = 0.0;
    int branch = 1, selector = 0;
    cat_build->add_option("--family", family, "family name")->required();
    cat_build->add_option("--params", params, "comma separated turns, e.g. 1/6,1/12 or 9/24+c2,0");
    auto* theta_opt = cat_build->add_option("--theta", theta, "hermitian family angle (radians)");
    cat_build->add_option("--branch", branch, "hermitian square-root branch (+1 or -1)");
    cat_build->add_option("--selector", selector, "dita-block-circulant selector 0..4");
    cat_build->add_option("--out", out, "output file (default stdout)");
    cat_list->callback([&] {
        json j = json::array();
        std::string csv = "family,arity\n";
        for (const auto& f : family_list()) {
            j.push_back({{"family", f.name}, {"arity", f.arity}});
            csv += f.name + ",\"" + f.arity + "\"\n";
        }
        if (g.format == "text") {
            for (const auto& f : family_list()) std::cout << f.name << ": " << f.arity << '\n';
        } else {
            emit(g, j, "", csv);
        }
    });
    cat_build->callback([&] {
        const FamilySpec spec = family_spec(family, params, theta, theta_opt->count() > 0, branch, selector);
        if (spec.family == Family::Tao) prepare_tao(true);
        const BasisMatrix m = build(spec);
        emit(g, matrix_to_json(m), out);
    });

    // equiv
    auto* equiv = app.add_subcommand("equiv", "equivalence of Hadamard matrices");
    equiv->require_subcommand(1);
    auto* equiv_test = equiv->add_subcommand("test", "exit 0 when equivalent, 1 otherwise");
    std::string file_a, file_b;
    bool unordered = false;
    double equiv_tol = 1e-9;
    equiv_test->add_option("a", file_a, "matrix JSON")->required();
    equiv_test->add_option("b", file_b, "matrix JSON")->required();
    equiv_test->add_flag("--unordered", unordered, "also accept b†");
    equiv_test->add_option("--tol", equiv_tol, "entrywise tolerance")->capture_default_str();
    equiv_test->callback([&] {
        const Tolerances t = g.tolerances();
        const BasisMatrix a = read_matrix(file_a, t);
        const BasisMatrix b = read_matrix(file_b, t);
        auto w = are_equivalent(a, b, equiv_tol);
        bool via_adjoint = false;
        if (!w && unordered) {
            w = are_equivalent(a, b.adjoint(), equiv_tol);
            via_adjoint = w.has_value();
        }
        json j{{"equivalent", w.has_value()}, {"tolerance", equiv_tol}};
        if (w) {
            json rp = json::array(), cp = json::array();
            for (const auto& z : w->row_phases) rp.push_back(json::array({z.real(), z.imag()}));
            for (const auto& z : w->col_phases) cp.push_back(json::array({z.real(), z.imag()}));
            j["witness"] = {{"relation", "a(r,c) = row_phases[r] * b(row_permutation[r], col_permutation[c]) * col_phases[c]"},
                            {"b_is_adjoint", via_adjoint},
                            {"row_permutation", w->row_permutation},
                            {"col_permutation", w->col_permutation},
                            {"row_phases", rp},
                            {"col_phases", cp}};
        }
        emit(g, j, "");
        exit_code = w ? 0 : 1;
    });

    // distance
    auto* distance = app.add_subcommand("distance", "chordal Grassmannian distance squared");
    std::string matrix_list, table_out;
    distance->add_option("a", file_a, "matrix JSON");
    distance->add_option("b", file_b, "matrix JSON");
    distance->add_option("--matrix-list", matrix_list, "directory of matrix JSON files");
    distance->add_option("--table", table_out, "CSV output for the pairwise table");
    distance->callback([&] {
        const Tolerances t = g.tolerances();
        const int digits = t.distance_report_digits;
        if (!matrix_list.empty()) {
            std::vector<fs::path> files;
            for (const auto& e : fs::directory_iterator(matrix_list))
                if (e.path().extension() == ".json") files.push_back(e.path());
            std::sort(files.begin(), files.end());
            std::vector<BasisMatrix> ms;
            std::vector<std::string> names;
            for (const auto& f : files) {
                ms.push_back(read_matrix(f.string(), t));
                names.push_back(f.stem().string());
            }
            const auto k = static_cast<Eigen::Index>(ms.size());
            Eigen::MatrixXd d = Eigen::MatrixXd::Zero(k, k);
            for (Eigen::Index i = 0; i < k; ++i)
                for (Eigen::Index j = i + 1; j < k; ++j)
                    d(i, j) = d(j, i) = chordal_distance_sq(ms[static_cast<std::size_t>(i)], ms[static_cast<std::size_t>(j)]);
            std::string csv = "name";
            for (const auto& n : names) csv += "," + n;
            csv += "\n";
            for (Eigen::Index i = 0; i < k; ++i) {
                csv += names[static_cast<std::size_t>(i)];
                for (Eigen::Index j = 0; j < k; ++j) csv += "," + rounded(d(i, j), digits);
                csv += "\n";
            }
            if (!table_out.empty()) write_text(csv, table_out);
            if (table_out.empty() || g.format != "csv") emit(g, json{{"names", names}, {"distances", table_json(d)}}, "", csv);
            return;
        }
        if (file_a.empty() || file_b.empty()) throw InvalidInput("distance needs two matrix files or --matrix-list");
        const BasisMatrix a = read_matrix(file_a, t);
        const BasisMatrix b = read_matrix(file_b, t);
        const double d2 = chordal_distance_sq(a, b);
        const Eigen::VectorXd angles = principal_angles(a, b);
        json ang = json::array();
        for (Eigen::Index i = 0; i < angles.size(); ++i) ang.push_back(angles(i));
        emit(g,
             json{{"d2", d2},
                  {"d2_rounded", rounded(d2, digits)},
                  {"d2_projectors", chordal_distance_via_projectors(a, b)},
                  {"principal_angles", ang},
                  {"unbiased", are_unbiased(a, b, t)}},
             "");
    });

    // average
    auto* average = app.add_subcommand("average", "Monte-Carlo mean distance to a random basis");
    int dim = 6;
    std::size_t samples = 100000;
    average->add_option("--n", dim, "dimension")->capture_default_str();
    average->add_option("--samples", samples, "sample count")->capture_default_str();
    average->callback([&] {
        const Estimate e = average_distance_estimate(dim, samples, g.seed, g.workers);
        emit(g,
             json{{"n", dim},
                  {"samples", e.samples},
                  {"mean", e.mean},
                  {"std_error", e.std_error},
                  {"expected", static_cast<double>(dim) / (dim + 1)}},
             "");
    });

    // biunimodular
    auto* biuni = app.add_subcommand("biunimodular", "sequences with unimodular Fourier transform");
    std::string alphabet_text = "roots:12";
    bool all_multiples = false;
    biuni->add_option("--n", dim, "length")->capture_default_str();
    biuni->add_option("--alphabet", alphabet_text, "e.g. roots:12 or roots:12,d^2")->capture_default_str();
    biuni->add_flag("--all", all_multiples, "list every alphabet multiple instead of pinning the first entry to 1");
    biuni->callback([&] {
        const auto recs = enumerate_biunimodular(dim, SearchAlphabet::parse(alphabet_text), !all_multiples,
                                                 g.tolerances(), g.scan());
        json list = json::array();
        std::size_t classical = 0;
        for (const auto& r : recs) {
            list.push_back({{"sequence", vector_json(r.sequence)}, {"classical", r.classical}});
            classical += r.classical ? 1 : 0;
        }
        emit(g,
             json{{"n", dim},
                  {"alphabet", alphabet_text},
                  {"count", recs.size()},
                  {"classical", classical},
                  {"sequences", list}},
             "");
    });

    // census
    auto* census_cmd = app.add_subcommand("census", "all bases unbiased to 1 and F over the census alphabet");
    census_cmd->add_option("--out", out, "output file (default stdout)");
    census_cmd->callback([&] {
        const Tolerances t = g.tolerances();
        const std::string dir = cache_dir();
        const std::string key = census_alphabet().descriptor() + ";" + rounded(t.unbiasedness * 1e12, 0);
        const fs::path cache = dir.empty() ? fs::path() : fs::path(dir) / "census.json";
        if (!dir.empty() && fs::exists(cache)) {
            std::ifstream in(cache);
            std::stringstream ss;
            ss << in.rdbuf();
            try {
                const json j = parse_json_text(ss.str(), cache.string());
                if (j.value("key", "") == key) {
                    emit(g, j.at("report"), out);
                    return;
                }
            } catch (const std::exception& e) {
                std::cerr << "ignoring cache " << cache << ": " << e.what() << '\n';
            }
        }
        const Census c = fourier_census(t, g.scan());
        json bases = json::array();
        for (const auto& b : c.bases)
            bases.push_back({{"group", b.group}, {"family", b.family}, {"classical", b.classical},
                             {"matrix", matrix_to_json(b.basis)}});
        json vectors = json::array();
        for (const auto& v : c.vectors) vectors.push_back(vector_json(v));
        json rounded_table = json::array();
        for (Eigen::Index i = 0; i < c.distances.rows(); ++i) {
            json row = json::array();
            for (Eigen::Index j = 0; j < c.distances.cols(); ++j)
                row.push_back(rounded(c.distances(i, j), t.distance_report_digits));
            rounded_table.push_back(std::move(row));
        }
        const json report{{"alphabet", census_alphabet().descriptor()},
                          {"vectors", vectors},
                          {"vector_multiplicity", c.vector_multiplicity},
                          {"bases", bases},
                          {"distances", table_json(c.distances)},
                          {"distances_rounded", rounded_table},
                          {"max_distance", c.max_distance},
                          {"vector_stats", stats_json(c.vector_stats)},
                          {"basis_stats", stats_json(c.basis_stats)}};
        if (!dir.empty()) {
            fs::create_directories(dir);
            write_text(json{{"key", key}, {"report", report}}.dump() + "\n", cache.string());
        }
        emit(g, report, out);
    });

    // search
    auto* search = app.add_subcommand("search", "exhaustive searches over phase alphabets");
    search->require_subcommand(1);
    int roots = 12, power = 1;
    std::vector<std::string> extras;
    bool big = false, progress = false;
    std::string checkpoint, mub1_file;
    auto* survey_cmd = search->add_subcommand("survey", "all (MUB)_1 classes over the alphabet and their triplets");
    auto* triplets_cmd = search->add_subcommand("triplets", "candidates for (MUB)_2 given (MUB)_1");
    for (auto* c : {survey_cmd, triplets_cmd}) {
        c->add_option("--roots", roots, "root order of the alphabet")->capture_default_str();
        c->add_option("--extras", extras, "extra constants: d, b1, b2")->check(CLI::IsMember({"d", "b1", "b2"}));
        c->add_option("--extra-power", power, "largest power of each extra constant")->capture_default_str();
        c->add_flag("--big", big, "allow root orders above 24");
        c->add_flag("--progress", progress, "progress on standard error");
        c->add_option("--out", out, "output file (default stdout)");
    }
    triplets_cmd->add_option("--mub1", mub1_file, "matrix JSON for (MUB)_1")->required();
    triplets_cmd->add_option("--checkpoint", checkpoint, "resume file for the vector scan");
    survey_cmd->callback([&] {
        prepare_tao(false);
        const SearchAlphabet a = make_alphabet(roots, extras, power, big);
        const Tolerances t = g.tolerances();
        const SurveyReport rep = survey(a, t, g.scan(progress));
        json entries = json::array();
        for (const auto& e : rep.entries) {
            json j = triplet_json(e.report, t.distance_report_digits);
            j["label"] = e.label;
            j["class_size"] = e.class_size;
            entries.push_back(std::move(j));
        }
        json ext = json::object();
        for (const auto* e : rep.extendable()) ext[e->label] = e->report.candidates.size();
        emit(g,
             json{{"alphabet", rep.alphabet},
                  {"hadamard_count", rep.hadamard_count},
                  {"classes", rep.entries.size()},
                  {"extendable", ext},
                  {"entries", entries}},
             out);
    });
    triplets_cmd->callback([&] {
        prepare_tao(false);
        const SearchAlphabet a = make_alphabet(roots, extras, power, big);
        const Tolerances t = g.tolerances();
        const BasisMatrix m = read_matrix(mub1_file, t);
        const Labeler labeler(a);
        const TripletReport r = triplet_search(m, a, t, g.scan(progress, checkpoint), &labeler);
        json j = triplet_json(r, t.distance_report_digits);
        j["alphabet"] = a.descriptor();
        emit(g, j, out);
    });

    // defect
    auto* defect_cmd = app.add_subcommand("defect", "defect and the staged expansion around D(0)");
    defect_cmd->require_subcommand(1);
    auto* def_compute = defect_cmd->add_subcommand("compute", "defect of a Hadamard matrix");
    auto* def_expand = defect_cmd->add_subcommand("dita-expand", "order-by-order expansion around D(0)");
    auto* def_scan = defect_cmd->add_subcommand("scan-hermitian", "defect at random admissible theta of B(theta)");
    std::string matrix_file, seed_text;
    int order = 3, scan_samples = 100;
    double match_x = 0.01;
    def_compute->add_option("matrix", matrix_file, "matrix JSON")->required();
    def_expand->add_option("--seed", seed_text, "x[12],x[13],x[24],x[34]")->required();
    def_expand->add_option("--order", order, "1, 2 or 3")->capture_default_str();
    def_expand->add_option("--out", out, "output file (default stdout)");
    def_scan->add_option("--samples", scan_samples, "number of theta values")->capture_default_str();
    def_scan->add_option("--match-x", match_x, "scale of the (-x,-x,2x,x) expansion matched to B(theta)")
        ->capture_default_str();
    def_compute->callback([&] {
        prepare_tao(false);
        const Tolerances t = g.tolerances();
        const DefectAnalysis a = defect_analysis(read_matrix(matrix_file, t), t);
        json sv = json::array();
        for (Eigen::Index i = 0; i < a.singular_values.size(); ++i) sv.push_back(a.singular_values(i));
        emit(g, json{{"defect", a.defect}, {"rank", a.rank}, {"threshold", a.threshold}, {"singular_values", sv}}, "");
    });
    def_expand->callback([&] {
        const auto parts = split(seed_text, ',');
        if (parts.size() != 4) throw InvalidInput("--seed needs four comma separated values");
        ExpansionSeed seed{};
        for (std::size_t i = 0; i < 4; ++i) seed[i] = std::stod(parts[i]);
        const ExpansionReport r = dita_expand(seed, order);
        json stages = json::array();
        const auto mat = [](const Eigen::MatrixXd& m) { return table_json(m); };
        for (const auto& s : r.stages)
            stages.push_back({{"order", s.order},
                              {"phases", mat(s.solution.x)},
                              {"diagonal", mat(s.solution.diagonal())},
                              {"symmetric", mat(s.solution.symmetric())},
                              {"antisymmetric", mat(s.solution.antisymmetric())},
                              {"residual", s.residual},
                              {"consistent", s.consistent}});
        json j{{"seed", seed},
               {"order", r.order},
               {"stages", stages},
               {"consistent", r.consistent},
               {"gauge_max", r.gauge_max},
               {"first_order_formula_deviation", r.first_order_formula_deviation},
               {"convergence_eps", r.convergence_eps},
               {"convergence_residuals", r.convergence_residuals},
               {"convergence_order", r.convergence_order ? json(*r.convergence_order) : json("unbounded")}};
        if (order >= 2)
            j["second_order"] = {{"antisymmetric_max", r.y_antisymmetric_max},
                                 {"diagonal_formula_max", r.y_diagonal_formula_max},
                                 {"symmetric_spread", r.y_symmetric_spread},
                                 {"y", r.y_common},
                                 {"y_closed_form", r.y_closed_form},
                                 {"y_closed_form_deviation", r.y_closed_form_deviation}};
        if (order >= 3) j["third_order"] = {{"diagonal_max", r.z_diagonal_max}, {"symmetric_max", r.z_symmetric_max}};
        emit(g, j, out);
    });
    def_scan->callback([&] {
        const Tolerances t = g.tolerances();
        std::mt19937_64 rng(g.seed);
        const double lo = std::acos((std::sqrt(3.0) - 1.0) / 2.0);
        std::uniform_real_distribution<double> dist(lo, kTwoPi - lo);
        std::map<int, int> hist;
        json rows = json::array();
        for (int i = 0; i < scan_samples; ++i) {
            const double th = dist(rng);
            const int br = i % 2 == 0 ? +1 : -1;
            const int d = defect(build(FamilySpec::hermitian(th, br)), t);
            ++hist[d];
            rows.push_back({{"theta", th}, {"branch", br}, {"defect", d}});
        }
        json h = json::object();
        for (const auto& [d, n] : hist) h[std::to_string(d)] = n;
        const HermitianMatch m = match_hermitian_direction(match_x);
        emit(g,
             json{{"samples", scan_samples},
                  {"defect_histogram", h},
                  {"points", rows},
                  {"direction_match",
                   {{"x", m.x},
                    {"theta", m.theta},
                    {"branch", m.branch},
                    {"invariant_distance", m.invariant_distance},
                    {"equivalent", m.equivalent}}}},
             "");
    });

    // reproduce
    auto* repro = app.add_subcommand("reproduce", "recompute published numbers; exit 0 iff every claim passes");
    std::vector<std::string> sections;
    bool timings = false;
    std::vector<std::string> allowed = reproduce_sections();
    allowed.push_back("all");
    repro->add_option("sections", sections, "sections (default all)")->check(CLI::IsMember(allowed));
    repro->add_option("--out", out, "bundle file (default stdout)");
    repro->add_flag("--timings", timings, "include per-claim runtimes in the bundle");
    repro->callback([&] { exit_code = run_reproduce(g, sections, out, timings); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return exit_code;
}
