// polyroute command-line tool. Talks to the library only through the C API.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "polyroute/polyroute.h"

namespace {

enum Exit { kOk = 0, kValidation = 1, kViolation = 2, kIo = 3 };

int exit_for(pr_status s)
{
    switch (s) {
    case PR_OK:
        return kOk;
    case PR_IO_ERROR:
    case PR_TRUNCATED_STREAM:
    case PR_CHECKSUM_MISMATCH:
    case PR_FORMAT_VERSION_MISMATCH:
        return kIo;
    default:
        return kValidation;
    }
}

// Prints the error and returns the exit code for a failed call.
int report(pr_status s, const char* what)
{
    std::cerr << "error: " << what << ": " << pr_status_name(s) << ": " << pr_last_error_message() << "\n";
    return exit_for(s);
}

struct Freer {
    void operator()(pr_mesh* p) const { pr_mesh_free(p); }
    void operator()(pr_network* p) const { pr_network_free(p); }
    void operator()(pr_trace* p) const { pr_trace_free(p); }
    void operator()(pr_report* p) const { pr_report_free(p); }
    void operator()(char* p) const { pr_string_free(p); }
};
template <class T>
using Owned = std::unique_ptr<T, Freer>;

// Writes text to `path`, or stdout when path is empty.
int emit(const std::string& path, const char* text)
{
    if (path.empty()) {
        std::cout << text;
        return kOk;
    }
    std::ofstream os(path, std::ios::binary);
    os << text;
    if (!os) {
        std::cerr << "error: cannot write " << path << "\n";
        return kIo;
    }
    return kOk;
}

struct GenArgs {
    std::string shape;
    std::vector<std::string> rest;
    std::uint64_t seed = 0;
    std::string out;
};

int cmd_gen(const GenArgs& a)
{
    std::uint32_t n = 0;
    std::uint64_t seed = a.seed;
    for (const auto& tok : a.rest) {
        try {
            if (tok.rfind("seed=", 0) == 0)
                seed = std::stoull(tok.substr(5));
            else
                n = static_cast<std::uint32_t>(std::stoul(tok));
        } catch (const std::exception&) {
            std::cerr << "error: bad argument '" << tok << "'\n";
            return kValidation;
        }
    }
    if (a.shape == "sphere" && n < 4) {
        std::cerr << "error: sphere needs N >= 4\n";
        return kValidation;
    }
    pr_mesh* raw = nullptr;
    if (auto s = pr_mesh_generate(a.shape.c_str(), n, seed, &raw); s != PR_OK)
        return report(s, "gen");
    Owned<pr_mesh> mesh(raw);
    char* text = nullptr;
    if (auto s = pr_mesh_to_off(mesh.get(), &text); s != PR_OK)
        return report(s, "gen");
    Owned<char> owned(text);
    return emit(a.out, text);
}

struct ValidateArgs {
    std::string mesh;
    double delta = 0.5;
    bool json = false;
};

int cmd_validate(const ValidateArgs& a)
{
    pr_mesh* raw = nullptr;
    if (auto s = pr_mesh_load_off(a.mesh.c_str(), &raw); s != PR_OK)
        return report(s, "validate");
    Owned<pr_mesh> mesh(raw);
    pr_mesh_report r{};
    if (auto s = pr_mesh_validate(mesh.get(), a.delta, &r); s != PR_OK)
        return report(s, "validate");
    if (a.json) {
        nlohmann::json j{{"valid", true},
                         {"vertices", r.vertices},
                         {"faces", r.faces},
                         {"edges", r.edges},
                         {"theta_m", r.theta_m},
                         {"theta_m_fan", r.theta_m_fan},
                         {"min_corner_angle", r.min_corner_angle},
                         {"diameter", r.diameter},
                         {"surface_area", r.surface_area},
                         {"delta", a.delta},
                         {"patches", r.patches},
                         {"max_normal_cone_width", r.max_normal_cone_width}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::printf("valid true\nvertices %u\nfaces %u\nedges %u\n", r.vertices, r.faces, r.edges);
        std::printf("theta_m %.12g\ntheta_m_fan %.12g\nmin_corner_angle %.12g\n", r.theta_m, r.theta_m_fan,
                    r.min_corner_angle);
        std::printf("diameter %.12g\nsurface_area %.12g\n", r.diameter, r.surface_area);
        std::printf("delta %.12g\npatches %u\nmax_normal_cone_width %.12g\n", a.delta, r.patches,
                    r.max_normal_cone_width);
    }
    return kOk;
}

struct PreprocessArgs {
    std::string mesh;
    double eps = 0.5;
    std::optional<double> delta;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string json;
    std::string spanner;
};

int cmd_preprocess(const PreprocessArgs& a)
{
    pr_mesh* raw = nullptr;
    if (auto s = pr_mesh_load_off(a.mesh.c_str(), &raw); s != PR_OK)
        return report(s, "preprocess");
    Owned<pr_mesh> mesh(raw);
    pr_config cfg{};
    cfg.eps = a.eps;
    cfg.delta = a.delta.value_or(0);
    cfg.use_seed = a.seed.has_value();
    cfg.seed = a.seed.value_or(0);
    pr_network* nraw = nullptr;
    if (auto s = pr_preprocess(mesh.get(), &cfg, &nraw); s != PR_OK)
        return report(s, "preprocess");
    Owned<pr_network> net(nraw);

    char* summary = nullptr;
    if (auto s = pr_network_summary(net.get(), &summary); s != PR_OK)
        return report(s, "preprocess");
    Owned<char> owned(summary);
    std::cout << summary;

    if (!a.out.empty())
        if (auto s = pr_network_save(net.get(), a.out.c_str()); s != PR_OK)
            return report(s, "save");
    if (!a.json.empty()) {
        char* text = nullptr;
        if (auto s = pr_network_to_json(net.get(), &text); s != PR_OK)
            return report(s, "json");
        Owned<char> j(text);
        if (int rc = emit(a.json, text))
            return rc;
    }
    if (!a.spanner.empty()) {
        char* text = nullptr;
        if (auto s = pr_network_spanner_dump(net.get(), &text); s != PR_OK)
            return report(s, "spanner");
        Owned<char> d(text);
        if (int rc = emit(a.spanner, text))
            return rc;
    }
    return kOk;
}

Owned<pr_network> load_tables(const std::string& path, int& rc)
{
    pr_network* raw = nullptr;
    if (auto s = pr_network_load(path.c_str(), &raw); s != PR_OK) {
        rc = report(s, "load");
        return nullptr;
    }
    rc = kOk;
    return Owned<pr_network>(raw);
}

struct RouteArgs {
    std::string tables;
    std::uint32_t from = 0;
    std::uint32_t to = 0;
    bool trace = false;
    bool oracle = false;
    bool json = false;
    std::uint32_t subdiv = 16;
    double hop_mult = 0;
};

int cmd_route(const RouteArgs& a)
{
    int rc = kOk;
    auto net = load_tables(a.tables, rc);
    if (!net)
        return rc;
    pr_trace* raw = nullptr;
    if (auto s = pr_route(net.get(), a.from, a.to, a.hop_mult, &raw); s != PR_OK)
        return report(s, "route");
    Owned<pr_trace> tr(raw);

    std::optional<double> oracle;
    if (a.oracle) {
        double d = 0;
        if (auto s = pr_oracle_distance(net.get(), a.from, a.to, a.subdiv, &d); s != PR_OK)
            return report(s, "oracle");
        oracle = d;
    }
    const std::size_t hops = pr_trace_hop_count(tr.get());
    const double len = pr_trace_length(tr.get());
    std::uint64_t label_bits = 0, plane_bits = 0;
    if (auto s = pr_network_header_bits(net.get(), a.hop_mult, &label_bits, &plane_bits); s != PR_OK)
        return report(s, "header");

    if (a.json) {
        nlohmann::json j{{"from", a.from}, {"to", a.to}, {"hops", hops}, {"length", len},
                         {"degenerate_events", pr_trace_degenerate_events(tr.get())},
                         {"header_label_bits", label_bits}, {"header_plane_bits", plane_bits}};
        std::vector<std::uint32_t> path;
        for (std::size_t i = 0; i <= hops; ++i)
            path.push_back(pr_trace_vertex(tr.get(), i));
        j["path"] = path;
        if (oracle) {
            j["oracle"] = *oracle;
            j["stretch"] = len / *oracle;
        }
        std::cout << j.dump(2) << "\n";
        return kOk;
    }
    if (a.trace) {
        char* text = nullptr;
        if (auto s = pr_trace_format(tr.get(), &text); s != PR_OK)
            return report(s, "trace");
        Owned<char> t(text);
        std::cout << text;
    } else {
        std::printf("from %u\nto %u\nhops %zu\nlength %.12g\n", a.from, a.to, hops, len);
        std::printf("header_label_bits %llu\nheader_plane_bits %llu\n", static_cast<unsigned long long>(label_bits),
                    static_cast<unsigned long long>(plane_bits));
    }
    if (oracle)
        std::printf("oracle %.12g\nstretch %.12g\n", *oracle, len / *oracle);
    return kOk;
}

struct BenchArgs {
    std::string tables;
    std::size_t pairs = 1000;
    std::uint64_t seed = 0;
    std::uint32_t subdiv = 16;
    double hop_mult = 0;
    bool all_pairs = false;
    std::string out;
};

int cmd_bench(const BenchArgs& a)
{
    int rc = kOk;
    auto net = load_tables(a.tables, rc);
    if (!net)
        return rc;
    pr_report* raw = nullptr;
    pr_status s;
    if (a.all_pairs) {
        const auto n = static_cast<std::uint32_t>(pr_network_vertex_count(net.get()));
        std::vector<std::uint32_t> src, dst;
        for (std::uint32_t i = 0; i < n; ++i)
            for (std::uint32_t j = 0; j < n; ++j)
                if (i != j) {
                    src.push_back(i);
                    dst.push_back(j);
                }
        s = pr_bench_pairs(net.get(), src.data(), dst.data(), src.size(), a.subdiv, a.hop_mult, &raw);
    } else {
        s = pr_bench(net.get(), a.pairs, a.seed, a.subdiv, a.hop_mult, &raw);
    }
    if (s != PR_OK)
        return report(s, "bench");
    Owned<pr_report> rep(raw);
    char* csv = nullptr;
    if (auto cs = pr_report_csv(rep.get(), &csv); cs != PR_OK)
        return report(cs, "bench");
    Owned<char> owned(csv);
    if (int erc = emit(a.out, csv))
        return erc;
    std::fprintf(stderr, "pairs %zu violations %zu max_ratio %.6g mean_ratio %.6g mu %.6g\n",
                 pr_report_pair_count(rep.get()), pr_report_violations(rep.get()), pr_report_max_ratio(rep.get()),
                 pr_report_mean_ratio(rep.get()), pr_report_mu(rep.get()));
    return pr_report_violations(rep.get()) > 0 ? kViolation : kOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Local routing on convex polytopes"};
    app.require_subcommand(1);

    GenArgs gen;
    auto* g = app.add_subcommand("gen", "Write a test polytope as OFF");
    g->add_option("shape", gen.shape, "tetra, cube, octa or sphere")->required();
    g->add_option("args", gen.rest, "for sphere: N [seed=S]");
    g->add_option("--seed", gen.seed, "Random seed");
    g->add_option("--out", gen.out, "Output file (default stdout)");

    ValidateArgs val;
    auto* v = app.add_subcommand("validate", "Check a mesh and print its parameters");
    v->add_option("mesh", val.mesh, "OFF file")->required();
    v->add_option("--delta", val.delta, "Patch flatness for the patch count")->check(CLI::PositiveNumber);
    v->add_flag("--json", val.json, "JSON output");

    PreprocessArgs pre;
    auto* p = app.add_subcommand("preprocess", "Build routing tables");
    p->add_option("mesh", pre.mesh, "OFF file")->required();
    p->add_option("--eps", pre.eps, "Accuracy parameter in (0,1)");
    p->add_option("--delta", pre.delta, "Patch flatness (default: eps)");
    p->add_option("--seed", pre.seed, "Seed for landmark sampling (default: degree order)");
    p->add_option("--out", pre.out, "Table file to write");
    p->add_option("--json", pre.json, "Also write the tables as JSON");
    p->add_option("--spanner", pre.spanner, "Also write the spanner as text");

    RouteArgs rt;
    auto* r = app.add_subcommand("route", "Route one packet");
    r->add_option("tables", rt.tables, "Table file")->required();
    r->add_option("--from", rt.from, "Source vertex")->required();
    r->add_option("--to", rt.to, "Destination vertex")->required();
    r->add_flag("--trace", rt.trace, "Print every hop");
    r->add_flag("--oracle", rt.oracle, "Compare with the subdivision oracle");
    r->add_flag("--json", rt.json, "JSON output");
    r->add_option("--subdiv", rt.subdiv, "Oracle points per edge");
    r->add_option("--hop-mult", rt.hop_mult, "Hop limit as a multiple of n");

    BenchArgs bn;
    auto* b = app.add_subcommand("bench", "Stretch sweep over random pairs, CSV output");
    b->add_option("tables", bn.tables, "Table file")->required();
    b->add_option("--pairs", bn.pairs, "Number of pairs");
    b->add_option("--seed", bn.seed, "Pair sampling seed");
    b->add_option("--subdiv", bn.subdiv, "Oracle points per edge");
    b->add_option("--hop-mult", bn.hop_mult, "Hop limit as a multiple of n");
    b->add_flag("--all-pairs", bn.all_pairs, "Every ordered pair instead of random ones");
    b->add_option("--out", bn.out, "CSV file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kValidation;
    }

    if (*g)
        return cmd_gen(gen);
    if (*v)
        return cmd_validate(val);
    if (*p)
        return cmd_preprocess(pre);
    if (*r)
        return cmd_route(rt);
    return cmd_bench(bn);
}
