// conivat: command-line front end.
//
//   conivat gen --gen synth1 --gen-seed 3 --out dir
//   conivat constraints --data iris.csv --label-column species --n-constraints 30 --seed 1 --out dir
//   conivat assess --data iris.csv --label-column species --constraints c.txt --variant conivat --out dir
//   conivat cluster --data iris.csv --label-column species --k 3 --seed 1 --out dir
//   conivat benchmark --data iris.csv --label-column species --gen synth1 --runs 10 --out dir
//   conivat ablation ... / conivat sweep --counts 5,10,20,30,50,100 ...
//
// Exit codes: 0 success, 2 usage or input error, 1 runtime failure.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "conivat.hpp"

namespace fs = std::filesystem;
using namespace conivat;

namespace {

struct Options {
    std::vector<std::string> data_paths;
    std::vector<std::string> generators;
    std::string label_column = "auto";
    std::uint64_t gen_seed = 0;
    std::size_t bridges = 12;
    std::string constraints_path;
    std::size_t n_constraints = 30;
    std::uint64_t seed = 0;
    std::string variant = "conivat";
    std::string algorithm = "conivat";
    std::vector<std::string> algorithms;
    std::size_t k = 0;
    std::string out = ".";
    std::size_t runs = 10;
    std::string scale = "linear";
    std::vector<std::size_t> counts = {5, 10, 20, 30, 50, 100};
    LearnConfig learn;
};

std::ofstream open_out(const Options& o, const std::string& name) {
    fs::create_directories(o.out);
    const auto path = fs::path(o.out) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ComputeError("cannot open for writing: " + path.string());
    out << std::setprecision(17);
    return out;
}

FeatureMatrix generate(const std::string& which, const Options& o) {
    if (which == "synth1") return gen_synth1(o.gen_seed, o.bridges);
    if (which == "synth2") return gen_synth2(o.gen_seed);
    throw InputError("unknown generator: " + which + " (expected synth1 or synth2)");
}

// "auto": a column named "label", else a non-numeric last column, else none.
std::optional<std::string> resolve_label_column(const std::string& path, const std::string& flag) {
    if (flag == "none") return std::nullopt;
    if (flag != "auto") return flag;
    std::ifstream in(path);
    std::string line;
    std::vector<std::vector<std::string>> head;
    while (head.size() < 2 && std::getline(in, line))
        if (!detail::trim(line).empty()) head.push_back(detail::split_csv_line(line));
    if (head.empty()) return std::nullopt;
    for (const auto& c : head.front())
        if (detail::trim(c) == "label") return "label";
    const auto& last = head.back().back();
    if (!detail::parse_real(last) && detail::trim(last) != "?" && !detail::trim(last).empty())
        return std::to_string(head.back().size() - 1);
    return std::nullopt;
}

std::vector<Dataset> load_datasets(const Options& o) {
    std::vector<Dataset> out;
    for (const auto& path : o.data_paths) {
        auto loaded = load_csv(path, resolve_label_column(path, o.label_column));
        if (loaded.dropped_rows) std::cerr << "note: dropped " << loaded.dropped_rows << " incomplete rows from " << path << '\n';
        out.push_back({fs::path(path).stem().string(), normalize_minmax(loaded.data)});
    }
    for (const auto& g : o.generators) out.push_back({g, normalize_minmax(generate(g, o))});
    return out;
}

Dataset load_single(const Options& o) {
    if (o.data_paths.size() + o.generators.size() != 1) throw InputError("give exactly one of --data or --gen");
    return load_datasets(o).front();
}

// Constraints from --constraints, else drawn from the labels.
ConstraintSet load_constraints(const Options& o, const FeatureMatrix& data) {
    if (!o.constraints_path.empty()) return read_constraints_file(o.constraints_path, data.size());
    if (data.has_labels() && o.n_constraints > 0) return generate_from_labels(data, o.n_constraints, o.seed);
    return ConstraintSet(data.size());
}

int cmd_gen(const Options& o) {
    if (o.generators.size() != 1 || !o.data_paths.empty()) throw InputError("gen needs exactly one --gen");
    auto out = open_out(o, o.generators.front() + ".csv");
    write_csv(generate(o.generators.front(), o), out);
    return 0;
}

int cmd_constraints(const Options& o) {
    const auto ds = load_single(o);
    if (!ds.data.has_labels()) throw InputError("constraint generation needs labels (--label-column)");
    auto out = open_out(o, "constraints.txt");
    write_constraints(generate_from_labels(ds.data, o.n_constraints, o.seed), out);
    return 0;
}

int cmd_assess(const Options& o) {
    const auto ds = load_single(o);
    const Variant variant = parse_variant(o.variant);
    const ConstraintSet cs = variant == Variant::ivat ? ConstraintSet(ds.data.size()) : load_constraints(o, ds.data);
    const auto r = conivat_pipeline(ds.data, cs, o.learn, variant);

    const Scale scale = parse_scale(o.scale);
    fs::create_directories(o.out);
    write_pgm(render(r.vat, scale), (fs::path(o.out) / "rdi.pgm").string());
    {
        auto out = open_out(o, "cuts.csv");
        out << "position,object,parent_position,cut\n";
        for (std::size_t t = 1; t < r.vat.size(); ++t)
            out << t << ',' << r.vat.order[t] << ',' << r.vat.mst_parent[t] << ',' << r.vat.cut_magnitudes[t - 1] << '\n';
    }
    const auto ranked = suggest_k(r.vat);
    {
        auto out = open_out(o, "suggest_k.csv");
        out << "rank,k,gap\n";
        for (std::size_t i = 0; i < ranked.size(); ++i) out << i + 1 << ',' << ranked[i].k << ',' << ranked[i].gap << '\n';
    }
    if (r.learning && !r.learning->report.identity_fallback) {
        const auto& a = r.learning->metric.matrix();
        auto m = open_out(o, "metric.csv");
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t j = 0; j < a.cols(); ++j) m << a(i, j) << (j + 1 < a.cols() ? ',' : '\n');
        auto t = open_out(o, "objective.csv");
        const auto& rep = r.learning->report;
        t << "iteration,objective\n";
        for (std::size_t i = 0; i < rep.objective_trace.size(); ++i) t << i + 1 << ',' << rep.objective_trace[i] << '\n';
        std::cout << "metric: " << rep.iterations_used << " iterations, " << (rep.converged ? "converged" : "hit max-iters")
                  << ", min eigenvalue " << rep.min_eigenvalue << '\n';
    }
    std::cout << variant_name(variant) << " on " << ds.name << " (" << ds.data.size() << " objects, "
              << r.constraints.similar().size() << " similar, " << r.constraints.dissimilar().size()
              << " dissimilar)\nsuggested k:";
    for (std::size_t i = 0; i < std::min<std::size_t>(3, ranked.size()); ++i)
        std::cout << ' ' << ranked[i].k << " (gap " << std::setprecision(4) << ranked[i].gap << ')';
    std::cout << '\n';
    return 0;
}

int cmd_cluster(const Options& o) {
    const auto ds = load_single(o);
    const Algorithm alg = parse_algorithm(o.algorithm);
    check_k(o.k, ds.data.size());
    const ConstraintSet cs = uses_constraints(alg) ? load_constraints(o, ds.data) : ConstraintSet(ds.data.size());
    const Partition p = run_algorithm(alg, ds.data, cs, o.k, o.learn);
    auto out = open_out(o, "partition.csv");
    out << "index,label\n";
    for (std::size_t i = 0; i < p.size(); ++i) out << i << ',' << p[i] << '\n';
    std::cout << algorithm_name(alg) << " on " << ds.name << ", k=" << o.k << '\n';
    if (ds.data.has_labels())
        std::cout << "PA: " << std::fixed << std::setprecision(2) << partition_accuracy(p, ds.data.labels()) << '\n';
    return 0;
}

Protocol protocol(const Options& o) {
    Protocol p;
    p.n_constraints = o.n_constraints;
    p.runs = o.runs;
    p.seed = o.seed;
    p.learn = o.learn;
    return p;
}

int report(const Options& o, const BenchmarkReport& r, const std::string& name) {
    auto out = open_out(o, name);
    write_report_csv(r, out);
    print_report_table(r, std::cout);
    return 0;
}

int cmd_benchmark(const Options& o) {
    const auto datasets = load_datasets(o);
    if (datasets.empty()) throw InputError("benchmark needs at least one --data or --gen");
    std::vector<Algorithm> algs;
    for (const auto& a : o.algorithms) algs.push_back(parse_algorithm(a));
    if (algs.empty()) algs.assign(std::begin(comparison_algorithms), std::end(comparison_algorithms));
    return report(o, run_benchmark(datasets, algs, protocol(o)), "benchmark.csv");
}

int cmd_ablation(const Options& o) { return report(o, run_ablation(load_single(o), protocol(o)), "ablation.csv"); }

int cmd_sweep(const Options& o) {
    return report(o, run_constraint_sweep(load_single(o), o.counts, protocol(o)), "sweep.csv");
}

void add_data_flags(CLI::App* sub, Options& o, bool many) {
    auto* d = sub->add_option("--data", o.data_paths, "CSV dataset (header optional)");
    auto* g = sub->add_option("--gen", o.generators, "synthetic generator: synth1 or synth2")
                  ->check(CLI::IsMember({"synth1", "synth2"}));
    if (!many) {
        d->expected(1);
        g->expected(1);
        d->excludes(g);
    }
    sub->add_option("--label-column", o.label_column, "label column name or 0-based index, auto or none")
        ->capture_default_str();
    sub->add_option("--gen-seed", o.gen_seed, "generator seed");
    sub->add_option("--bridges", o.bridges, "bridge points for synth1");
}

void add_learn_flags(CLI::App* sub, Options& o) {
    sub->add_option("--alpha", o.learn.alpha, "metric-learning gradient step")->capture_default_str();
    sub->add_option("--epsilon", o.learn.epsilon, "objective change threshold")->capture_default_str();
    sub->add_option("--max-iters", o.learn.max_iters, "gradient iterations")->capture_default_str();
    sub->add_option("--max-projections", o.learn.max_projections, "projection passes per iteration")
        ->capture_default_str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Constraint-driven visual cluster tendency assessment"};
    app.require_subcommand(1);
    Options o;

    auto* gen = app.add_subcommand("gen", "write a synthetic dataset as CSV");
    add_data_flags(gen, o, false);
    gen->add_option("--out", o.out, "output directory");

    auto* cons = app.add_subcommand("constraints", "draw labelled pairs and write a constraint file");
    add_data_flags(cons, o, false);
    cons->add_option("--n-constraints", o.n_constraints, "pairs to draw")->capture_default_str();
    cons->add_option("--seed", o.seed, "draw seed");
    cons->add_option("--out", o.out, "output directory");

    auto* assess = app.add_subcommand("assess", "render the reordered image and rank candidate k");
    add_data_flags(assess, o, false);
    add_learn_flags(assess, o);
    assess->add_option("--constraints", o.constraints_path, "constraint file (S i j / D i j lines)");
    assess->add_option("--n-constraints", o.n_constraints, "pairs drawn from labels when no file is given")
        ->capture_default_str();
    assess->add_option("--seed", o.seed, "draw seed");
    assess->add_option("--variant", o.variant, "ivat, metric-ivat, mtd-vat or conivat")->capture_default_str();
    assess->add_option("--scale", o.scale, "image scaling: linear or rank")->capture_default_str();
    assess->add_option("--out", o.out, "output directory");

    auto* cluster = app.add_subcommand("cluster", "partition into k clusters");
    add_data_flags(cluster, o, false);
    add_learn_flags(cluster, o);
    cluster->add_option("--k", o.k, "number of clusters")->required();
    cluster->add_option("--constraints", o.constraints_path, "constraint file");
    cluster->add_option("--n-constraints", o.n_constraints, "pairs drawn from labels when no file is given")
        ->capture_default_str();
    cluster->add_option("--seed", o.seed, "draw seed");
    cluster->add_option("--variant,--algorithm", o.algorithm,
                        "conivat, ivat, metric-ivat, mtd-vat, hac-sl, hac-cl, ccl or ssl")
        ->capture_default_str();
    cluster->add_option("--out", o.out, "output directory");

    auto* bench = app.add_subcommand("benchmark", "compare algorithms over seeded runs");
    bench->add_option("--algorithms", o.algorithms, "algorithms to run (default: comparison set)")->delimiter(',');
    auto* abl = app.add_subcommand("ablation", "compare the four pipeline variants");
    auto* sweep = app.add_subcommand("sweep", "vary the constraint count");
    sweep->add_option("--counts", o.counts, "constraint counts")->delimiter(',')->capture_default_str();
    for (auto* sub : {bench, abl, sweep}) {
        add_data_flags(sub, o, sub == bench);
        add_learn_flags(sub, o);
        sub->add_option("--n-constraints", o.n_constraints, "pairs per run")->capture_default_str();
        sub->add_option("--runs", o.runs, "runs")->capture_default_str();
        sub->add_option("--seed", o.seed, "master seed");
        sub->add_option("--out", o.out, "output directory");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        for (auto* sub : app.get_subcommands()) std::cerr << sub->help();
        return 2;
    }

    try {
        if (*gen) return cmd_gen(o);
        if (*cons) return cmd_constraints(o);
        if (*assess) return cmd_assess(o);
        if (*cluster) return cmd_cluster(o);
        if (*bench) return cmd_benchmark(o);
        if (*abl) return cmd_ablation(o);
        if (*sweep) return cmd_sweep(o);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
