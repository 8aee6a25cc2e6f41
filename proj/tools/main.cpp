// Command-line front end: training, evaluation protocols, sweeps, transforms,
// the synthetic generator, the gradient checker and the feasibility oracle.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dhne/errors.hpp"
#include "dhne/eval.hpp"
#include "dhne/hypergraph.hpp"
#include "dhne/model.hpp"
#include "dhne/snapshot.hpp"
#include "dhne/training.hpp"

namespace fs = std::filesystem;
using namespace dhne;

namespace {

std::vector<std::string> split_csv(const std::string& text) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<double> parse_double_list(const std::string& text, const char* what) {
    std::vector<double> out;
    for (const std::string& item : split_csv(text)) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw ConfigError(std::string(what) + ": cannot parse '" + item + "' as a number");
        }
    }
    return out;
}

std::vector<size_t> parse_size_list(const std::string& text, const char* what) {
    std::vector<size_t> out;
    for (double v : parse_double_list(text, what)) {
        if (v < 1.0) throw ConfigError(std::string(what) + ": values must be >= 1");
        out.push_back(static_cast<size_t>(v));
    }
    return out;
}

std::array<std::string, 3> parse_type_names(const std::string& text) {
    const auto parts = split_csv(text);
    if (parts.size() != 3) {
        throw ConfigError("--types expects exactly 3 comma-separated names, got '" + text + "'");
    }
    return {parts[0], parts[1], parts[2]};
}

std::string format_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Options shared by every command that trains a model.
struct TrainCliOpts {
    size_t dim = 64;
    double alpha = 1.0;
    double lr0 = 0.025;
    size_t batch = 64;
    size_t epochs = 100;
    size_t negatives = 5;
    double noise_exponent = 0.75;
    double tol = 1e-4;
    uint64_t seed = 1;

    TrainConfig to_config() const {
        TrainConfig cfg;
        cfg.embed_dim = dim;
        cfg.alpha = alpha;
        cfg.initial_lr = lr0;
        cfg.batch_size = batch;
        cfg.epochs = epochs;
        cfg.negatives_per_positive = negatives;
        cfg.noise_exponent = noise_exponent;
        cfg.convergence_tol = tol;
        cfg.seed = seed;
        cfg.validate();
        return cfg;
    }
};

void add_train_options(CLI::App* cmd, TrainCliOpts& opts) {
    cmd->add_option("--dim", opts.dim, "Embedding size per node")->capture_default_str();
    cmd->add_option("--alpha", opts.alpha, "Weight of the reconstruction objective")
        ->capture_default_str();
    cmd->add_option("--lr0", opts.lr0, "Starting learning rate (decays linearly)")
        ->capture_default_str();
    cmd->add_option("--batch", opts.batch, "Positives per SGD batch")->capture_default_str();
    cmd->add_option("--epochs", opts.epochs, "Epoch budget")->capture_default_str();
    cmd->add_option("--negatives", opts.negatives, "Negative samples per positive")
        ->capture_default_str();
    cmd->add_option("--noise-exponent", opts.noise_exponent,
                    "Degree exponent of the corruption distribution")
        ->capture_default_str();
    cmd->add_option("--tol", opts.tol, "Relative epoch-loss change for early stop (<=0 disables)")
        ->capture_default_str();
    cmd->add_option("--seed", opts.seed, "Random seed")
        ->envname("DHNE_SEED")
        ->capture_default_str();
}

struct GraphCliOpts {
    std::string edges_path;
    std::string types = "type0,type1,type2";
};

void add_graph_options(CLI::App* cmd, GraphCliOpts& opts) {
    cmd->add_option("--edges", opts.edges_path, "Triplet file (tab-separated, one edge per line)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--types", opts.types, "Comma-separated names of the 3 node types")
        ->capture_default_str();
}

Hypergraph load_graph(const GraphCliOpts& opts) {
    return Hypergraph::from_triples(read_triple_file(opts.edges_path),
                                    parse_type_names(opts.types));
}

std::string section_path(const CLI::App* cmd) {
    std::vector<std::string> parts;
    for (const CLI::App* a = cmd; a != nullptr && a->get_parent() != nullptr;
         a = a->get_parent()) {
        parts.push_back(a->get_name());
    }
    std::string out;
    for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
        if (!out.empty()) out += '.';
        out += *it;
    }
    return out;
}

void write_manifest(CLI::App* cmd, const fs::path& outdir) {
    std::string body =
        "# resolved configuration; rerun as: dhne --config manifest.ini " + section_path(cmd) +
        "\n[" + section_path(cmd) + "]\n";
    std::istringstream lines(cmd->config_to_str(true, false));
    std::string line;
    while (std::getline(lines, line)) {
        // Unset string options serialize as empty; dropping them keeps path
        // validators quiet on rerun.
        if (line.size() >= 3 && line.compare(line.size() - 3, 3, "=\"\"") == 0) continue;
        body += line + '\n';
    }
    atomic_write_text((outdir / "manifest.ini").string(), body);
}

void write_embeddings_file(const fs::path& path, const Hypergraph& g,
                           const EmbeddingTable& table) {
    std::string out;
    for (uint32_t t = 0; t < 3; ++t) {
        for (uint32_t i = 0; i < g.count(t); ++i) {
            out += g.type_names()[t];
            out += '\t';
            out += g.label(NodeRef{t, i});
            out += '\t';
            const auto row = table.per_type[t].row(i);
            for (size_t k = 0; k < row.size(); ++k) {
                if (k) out += ' ';
                out += format_value(row[k]);
            }
            out += '\n';
        }
    }
    atomic_write_text(path.string(), out);
}

void write_loss_history(const fs::path& path, const std::vector<double>& losses) {
    std::string out;
    for (size_t e = 0; e < losses.size(); ++e) {
        out += std::to_string(e);
        out += '\t';
        out += format_value(losses[e]);
        out += '\n';
    }
    atomic_write_text(path.string(), out);
}

void write_report_files(const fs::path& outdir, const EvalReport& report) {
    atomic_write_text((outdir / "report.txt").string(), report.to_text());
    atomic_write_text((outdir / "report.json").string(), report.to_json_string() + "\n");
}

void write_roc_file(const std::string& path,
                    const std::vector<std::pair<double, double>>& points) {
    std::string out = "fpr\ttpr\n";
    for (const auto& [fpr, tpr] : points) {
        out += format_value(fpr);
        out += '\t';
        out += format_value(tpr);
        out += '\n';
    }
    atomic_write_text(path, out);
}

fs::path ensure_outdir(const std::string& dir) {
    const fs::path out(dir);
    fs::create_directories(out);
    return out;
}

// ---- subcommand implementations --------------------------------------------

int run_train(CLI::App* cmd, const GraphCliOpts& graph_opts, const TrainCliOpts& train_opts,
              const std::string& outdir) {
    const Hypergraph g = load_graph(graph_opts);
    const SparseAdjacency adj = build_adjacency(g);
    const TrainConfig cfg = train_opts.to_config();

    TrainHooks hooks;
    hooks.on_epoch = [](size_t epoch, double loss) {
        std::printf("epoch %zu loss %.6f\n", epoch, loss);
    };
    const TrainResult result = train(g, adj, cfg, hooks);

    const fs::path out = ensure_outdir(outdir);
    save_snapshot(result.params, g.type_names(), (out / "snapshot.dhne").string());
    write_embeddings_file(out / "embeddings.tsv", g, result.embeddings);
    write_loss_history(out / "loss_history.tsv", result.epoch_losses);
    write_manifest(cmd, out);
    std::printf("trained %u edges over %u nodes; artifacts in %s\n", g.num_edges(),
                g.total_nodes(), out.string().c_str());
    return 0;
}

int run_eval_reconstruct(CLI::App* cmd, const GraphCliOpts& graph_opts,
                         const TrainCliOpts& train_opts, const std::string& snapshot_path,
                         const std::string& pairwise_path, const std::string& agg_mode,
                         size_t eval_negatives, uint64_t eval_seed, const std::string& outdir,
                         const std::string& roc_path) {
    const Hypergraph g = load_graph(graph_opts);
    const SparseAdjacency adj = build_adjacency(g);

    EvalReport report;
    std::vector<std::pair<double, double>> roc;
    auto* roc_ptr = roc_path.empty() ? nullptr : &roc;
    if (!pairwise_path.empty()) {
        const PairwiseScores scores = load_pairwise_scores(pairwise_path, g);
        report = reconstruction_eval_pairwise(g, scores, parse_aggregate(agg_mode),
                                              eval_negatives, eval_seed);
    } else if (!snapshot_path.empty()) {
        const Snapshot snap = load_snapshot(snapshot_path);
        report = reconstruction_eval(g, snap.params, adj, eval_negatives, eval_seed, roc_ptr);
    } else {
        const TrainConfig cfg = train_opts.to_config();
        const TrainResult trained = train(g, adj, cfg);
        report = reconstruction_eval(g, trained.params, adj, eval_negatives, eval_seed, roc_ptr);
        report.alpha = cfg.alpha;
    }
    report.seed = eval_seed;

    std::fputs(report.to_text().c_str(), stdout);
    if (!roc_path.empty() && !roc.empty()) write_roc_file(roc_path, roc);
    if (!outdir.empty()) {
        const fs::path out = ensure_outdir(outdir);
        write_report_files(out, report);
        write_manifest(cmd, out);
    }
    return 0;
}

int run_eval_linkpred(CLI::App* cmd, const GraphCliOpts& graph_opts,
                      const TrainCliOpts& train_opts, double hide, uint64_t eval_seed,
                      const std::string& outdir, const std::string& roc_path) {
    const Hypergraph g = load_graph(graph_opts);
    std::vector<std::pair<double, double>> roc;
    auto* roc_ptr = roc_path.empty() ? nullptr : &roc;
    const EvalReport report =
        link_prediction_eval(g, hide, train_opts.to_config(), eval_seed, roc_ptr);

    std::fputs(report.to_text().c_str(), stdout);
    if (!roc_path.empty() && !roc.empty()) write_roc_file(roc_path, roc);
    if (!outdir.empty()) {
        const fs::path out = ensure_outdir(outdir);
        write_report_files(out, report);
        write_manifest(cmd, out);
    }
    return 0;
}

int run_eval_sparsity(CLI::App* cmd, const GraphCliOpts& graph_opts,
                      const TrainCliOpts& train_opts, const std::string& ratios_text,
                      uint64_t eval_seed, const std::string& outdir) {
    const Hypergraph g = load_graph(graph_opts);
    const std::vector<double> ratios = parse_double_list(ratios_text, "--ratios");
    if (ratios.empty()) throw ConfigError("--ratios must name at least one remained-edge ratio");
    const auto reports = sparsity_sweep(g, ratios, train_opts.to_config(), eval_seed);

    std::string table = "remained\tauc\n";
    for (size_t i = 0; i < reports.size(); ++i) {
        table += format_value(ratios[i]);
        table += '\t';
        table += format_value(reports[i].auc);
        table += '\n';
    }
    std::fputs(table.c_str(), stdout);
    if (!outdir.empty()) {
        const fs::path out = ensure_outdir(outdir);
        atomic_write_text((out / "sparsity.tsv").string(), table);
        write_manifest(cmd, out);
    }
    return 0;
}

int run_sweep(CLI::App* cmd, const GraphCliOpts& graph_opts, const TrainCliOpts& train_opts,
              const std::string& alpha_grid_text, const std::string& dim_grid_text, double hide,
              uint64_t eval_seed, const std::string& outdir) {
    const Hypergraph g = load_graph(graph_opts);
    std::vector<double> alphas = parse_double_list(alpha_grid_text, "--alpha-grid");
    std::vector<size_t> dims = parse_size_list(dim_grid_text, "--dim-grid");
    if (alphas.empty() && dims.empty()) {
        throw ConfigError("sweep needs --alpha-grid and/or --dim-grid");
    }
    if (alphas.empty()) alphas.push_back(train_opts.alpha);
    if (dims.empty()) dims.push_back(train_opts.dim);

    std::string table = "alpha\tdim\tauc\tseconds\n";
    for (double alpha : alphas) {
        for (size_t dim : dims) {
            TrainCliOpts point = train_opts;
            point.alpha = alpha;
            point.dim = dim;
            const EvalReport report = link_prediction_eval(g, hide, point.to_config(), eval_seed);
            table += format_value(alpha);
            table += '\t';
            table += std::to_string(dim);
            table += '\t';
            table += format_value(report.auc);
            table += '\t';
            table += format_value(report.wall_seconds);
            table += '\n';
        }
    }
    std::fputs(table.c_str(), stdout);
    if (!outdir.empty()) {
        const fs::path out = ensure_outdir(outdir);
        atomic_write_text((out / "sweep.tsv").string(), table);
        write_manifest(cmd, out);
    }
    return 0;
}

// Row file for out-of-sample embedding: "id<TAB>type<TAB>index:count ...".
int run_embed(const std::string& snapshot_path, const std::string& rows_path,
              const std::string& out_path) {
    const Snapshot snap = load_snapshot(snapshot_path);
    std::ifstream in(rows_path);
    if (!in) throw ParseError("cannot open row file: " + rows_path);

    std::string output;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const std::string where = rows_path + ":" + std::to_string(lineno);

        std::istringstream fields(line);
        std::string id, type_token;
        if (!(fields >> id >> type_token)) {
            throw ParseError(where + ": expected 'id type index:count ...'");
        }
        int type = -1;
        for (int t = 0; t < 3; ++t) {
            if (snap.type_names[t] == type_token || std::to_string(t) == type_token) type = t;
        }
        if (type < 0) throw ParseError(where + ": unknown type '" + type_token + "'");

        std::vector<SparseEntry> entries;
        std::string pair;
        while (fields >> pair) {
            const size_t colon = pair.find(':');
            if (colon == std::string::npos) {
                throw ParseError(where + ": entry '" + pair + "' is not index:count");
            }
            try {
                const unsigned long index = std::stoul(pair.substr(0, colon));
                const unsigned long count = std::stoul(pair.substr(colon + 1));
                if (index >= snap.params.dims.feature_dim) {
                    throw ParseError(where + ": index " + std::to_string(index) +
                                     " outside the node universe");
                }
                entries.push_back(
                    SparseEntry{static_cast<uint32_t>(index), static_cast<uint32_t>(count)});
            } catch (const ParseError&) {
                throw;
            } catch (const std::exception&) {
                throw ParseError(where + ": entry '" + pair + "' is not index:count");
            }
        }
        std::sort(entries.begin(), entries.end(),
                  [](const SparseEntry& a, const SparseEntry& b) { return a.index < b.index; });

        const Vector emb = embed_out_of_sample(snap.params, static_cast<uint32_t>(type), entries);
        output += snap.type_names[type];
        output += '\t';
        output += id;
        output += '\t';
        for (size_t k = 0; k < emb.size(); ++k) {
            if (k) output += ' ';
            output += format_value(emb[k]);
        }
        output += '\n';
    }
    if (out_path.empty()) {
        std::fputs(output.c_str(), stdout);
    } else {
        atomic_write_text(out_path, output);
    }
    return 0;
}

int run_expand(const GraphCliOpts& graph_opts, const std::string& mode,
               const std::string& out_path) {
    const Hypergraph g = load_graph(graph_opts);
    auto token = [&](uint32_t global) {
        const NodeRef n = g.node_from_global(global);
        return g.type_names()[n.type] + ":" + g.label(n);
    };
    std::string output;
    if (mode == "clique") {
        for (const auto& [u, v] : clique_expand(g)) {
            output += token(u);
            output += '\t';
            output += token(v);
            output += '\n';
        }
    } else if (mode == "star") {
        const StarExpansion star = star_expand(g);
        for (const auto& [member, instance] : star.links) {
            output += token(member);
            output += '\t';
            output += "e" + std::to_string(instance - g.total_nodes());
            output += '\n';
        }
    } else {
        throw ConfigError("--mode must be 'clique' or 'star', got '" + mode + "'");
    }
    if (out_path.empty()) {
        std::fputs(output.c_str(), stdout);
    } else {
        atomic_write_text(out_path, output);
    }
    return 0;
}

int run_gen_planted(uint32_t nodes_per_type, uint32_t clusters, uint32_t num_edges, double noise,
                    uint64_t seed, const std::string& out_path) {
    const Hypergraph g = synthesize_planted(nodes_per_type, clusters, num_edges, noise, seed);
    std::string output = "# planted hypergraph: " + std::to_string(nodes_per_type) +
                         " nodes/type, " + std::to_string(clusters) + " clusters, noise " +
                         format_value(noise) + "\n";
    for (const Hyperedge& e : g.edges()) {
        output += g.label(e.members[0]);
        output += '\t';
        output += g.label(e.members[1]);
        output += '\t';
        output += g.label(e.members[2]);
        output += '\n';
    }
    if (out_path.empty()) {
        std::fputs(output.c_str(), stdout);
    } else {
        atomic_write_text(out_path, output);
    }
    std::fprintf(stderr, "generated %u distinct edges\n", g.num_edges());
    return 0;
}

int run_gradcheck(size_t instances, uint64_t seed, double tolerance) {
    double worst = 0.0;
    for (size_t k = 0; k < instances; ++k) {
        const uint64_t s = splitmix64(seed + k);
        const Hypergraph g =
            synthesize_planted(2 + k % 3, 2, 6 + k % 5, 0.4, s);
        const SparseAdjacency adj = build_adjacency(g);
        const DhneParams params =
            DhneParams::init(DhneDims(g.total_nodes(), 2 + k % 3), s ^ 1);
        const NegativeSampler sampler(g, 0.75);
        Rng rng(s ^ 2);
        const std::vector<Hyperedge> positives = {g.edges()[rng.uniform_index(g.num_edges())],
                                                  g.edges()[rng.uniform_index(g.num_edges())]};
        const auto batch = make_batch(g, adj, positives, sampler, 2, rng);
        const double alpha = 0.25 + 0.5 * static_cast<double>(k % 4);

        const BatchGradients bg = gradients(params, batch, alpha);
        auto objective = [&](const Vector& flat) {
            const DhneParams p = DhneParams::unpack(params.dims, flat);
            return dhne::gradients(p, batch, alpha).mean_loss;
        };
        const double disc = finite_diff_check(objective, bg.grads.pack(), params.pack(), 1e-6);
        worst = std::max(worst, disc);
        std::printf("instance %zu |V|=%u discrepancy %.3g\n", k, g.total_nodes(), disc);
    }
    std::printf("max_discrepancy %.3g (tolerance %.3g)\n", worst, tolerance);
    if (worst >= tolerance) throw NumericError("gradient check failed");
    return 0;
}

int run_oracle(double positive_floor, double negative_ceiling, double weight_bound,
               double embedding_bound) {
    LinearFeasibilityProblem problem;
    problem.positive_floor = positive_floor;
    problem.negative_ceiling = negative_ceiling;
    problem.weight_bound = weight_bound;
    problem.embedding_bound = embedding_bound;
    const TheoremOracleResult result = linear_infeasibility_oracle(problem);
    if (!result.feasible) {
        std::printf("infeasible\n");
        std::printf("certificate");
        for (double v : result.infeasibility_certificate) std::printf(" %.6g", v);
        std::printf("\n");
        return 0;
    }
    std::printf("feasible\n");
    for (int t = 0; t < 3; ++t) {
        std::printf("type %d weight %.9g cluster0 %.9g cluster1 %.9g\n", t,
                    result.witness->weights[t], result.witness->cluster_embeddings[t][0],
                    result.witness->cluster_embeddings[t][1]);
    }
    return 0;
}

int run_bench(const std::string& sizes_text, const TrainCliOpts& train_opts, size_t warmup,
              size_t timed, const std::string& out_path) {
    const std::vector<size_t> sizes = parse_size_list(sizes_text, "--sizes");
    const auto points = timing_benchmark(sizes, train_opts.to_config(), warmup, timed);
    std::vector<double> xs, ys;
    std::string table = "nodes\tseconds_per_batch\n";
    for (const TimingPoint& p : points) {
        xs.push_back(static_cast<double>(p.num_nodes));
        ys.push_back(p.seconds_per_batch);
        table += std::to_string(p.num_nodes);
        table += '\t';
        table += format_value(p.seconds_per_batch);
        table += '\n';
    }
    const LineFit fit = fit_line(xs, ys);
    std::fputs(table.c_str(), stdout);
    std::printf("fit slope %.3g intercept %.3g r2 %.4f\n", fit.slope, fit.intercept, fit.r2);
    if (!out_path.empty()) atomic_write_text(out_path, table);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deep hyper-network embedding: training and evaluation toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from a key=value file (CLI flags win)");

    int status = 0;

    // train -------------------------------------------------------------
    auto* train_cmd = app.add_subcommand("train", "Learn embeddings from a triplet file");
    train_cmd->configurable(true);
    GraphCliOpts train_graph;
    TrainCliOpts train_opts;
    std::string train_out;
    add_graph_options(train_cmd, train_graph);
    add_train_options(train_cmd, train_opts);
    train_cmd->add_option("--out", train_out, "Output directory")->required()->envname("DHNE_OUT");
    train_cmd->callback(
        [&]() { status = run_train(train_cmd, train_graph, train_opts, train_out); });

    // eval ----------------------------------------------------------------
    auto* eval_cmd = app.add_subcommand("eval", "Evaluation protocols");
    eval_cmd->require_subcommand(1);
    eval_cmd->configurable(true);

    auto* rec_cmd = eval_cmd->add_subcommand("reconstruct", "Score the observed edges");
    rec_cmd->configurable(true);
    GraphCliOpts rec_graph;
    TrainCliOpts rec_train;
    std::string rec_snapshot, rec_pairwise, rec_agg = "mean", rec_out, rec_roc;
    size_t rec_negatives = 1;
    uint64_t rec_seed = 1;
    add_graph_options(rec_cmd, rec_graph);
    add_train_options(rec_cmd, rec_train);
    rec_cmd->add_option("--snapshot", rec_snapshot,
                        "Score with saved parameters instead of training")
        ->check(CLI::ExistingFile);
    rec_cmd->add_option("--pairwise", rec_pairwise,
                        "Score with a third-party pairwise similarity file")
        ->check(CLI::ExistingFile);
    rec_cmd->add_option("--agg", rec_agg, "Pairwise aggregation: mean or min")
        ->capture_default_str();
    rec_cmd->add_option("--eval-negatives", rec_negatives, "Sampled non-edges per positive")
        ->capture_default_str();
    rec_cmd->add_option("--eval-seed", rec_seed, "Seed for candidate sampling")
        ->capture_default_str();
    rec_cmd->add_option("--out", rec_out, "Output directory")->envname("DHNE_OUT");
    rec_cmd->add_option("--roc", rec_roc, "Write raw (fpr, tpr) points to this file");
    rec_cmd->callback([&]() {
        status = run_eval_reconstruct(rec_cmd, rec_graph, rec_train, rec_snapshot, rec_pairwise,
                                      rec_agg, rec_negatives, rec_seed, rec_out, rec_roc);
    });

    auto* lp_cmd = eval_cmd->add_subcommand("linkpred", "Hide edges, retrain, score them");
    lp_cmd->configurable(true);
    GraphCliOpts lp_graph;
    TrainCliOpts lp_train;
    double lp_hide = 0.2;
    uint64_t lp_seed = 1;
    std::string lp_out, lp_roc;
    add_graph_options(lp_cmd, lp_graph);
    add_train_options(lp_cmd, lp_train);
    lp_cmd->add_option("--hide", lp_hide, "Share of edges to hide")
        ->check(CLI::Range(1e-9, 1.0 - 1e-9))
        ->capture_default_str();
    lp_cmd->add_option("--eval-seed", lp_seed, "Seed for the split and candidate sampling")
        ->capture_default_str();
    lp_cmd->add_option("--out", lp_out, "Output directory")->envname("DHNE_OUT");
    lp_cmd->add_option("--roc", lp_roc, "Write raw (fpr, tpr) points to this file");
    lp_cmd->callback([&]() {
        status = run_eval_linkpred(lp_cmd, lp_graph, lp_train, lp_hide, lp_seed, lp_out, lp_roc);
    });

    auto* sp_cmd =
        eval_cmd->add_subcommand("sparsity", "Link prediction over remained-edge ratios");
    sp_cmd->configurable(true);
    GraphCliOpts sp_graph;
    TrainCliOpts sp_train;
    std::string sp_ratios = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9";
    uint64_t sp_seed = 1;
    std::string sp_out;
    add_graph_options(sp_cmd, sp_graph);
    add_train_options(sp_cmd, sp_train);
    sp_cmd->add_option("--ratios", sp_ratios, "Comma-separated remained-edge ratios")
        ->capture_default_str();
    sp_cmd->add_option("--eval-seed", sp_seed, "Seed for splits and candidate sampling")
        ->capture_default_str();
    sp_cmd->add_option("--out", sp_out, "Output directory")->envname("DHNE_OUT");
    sp_cmd->callback([&]() {
        status = run_eval_sparsity(sp_cmd, sp_graph, sp_train, sp_ratios, sp_seed, sp_out);
    });

    // sweep ---------------------------------------------------------------
    auto* sweep_cmd = app.add_subcommand("sweep", "Hyperparameter sensitivity grid");
    sweep_cmd->configurable(true);
    GraphCliOpts sweep_graph;
    TrainCliOpts sweep_train;
    std::string sweep_alpha_grid, sweep_dim_grid, sweep_out;
    double sweep_hide = 0.2;
    uint64_t sweep_seed = 1;
    add_graph_options(sweep_cmd, sweep_graph);
    add_train_options(sweep_cmd, sweep_train);
    sweep_cmd->add_option("--alpha-grid", sweep_alpha_grid, "Comma-separated alpha values");
    sweep_cmd->add_option("--dim-grid", sweep_dim_grid, "Comma-separated embedding sizes");
    sweep_cmd->add_option("--hide", sweep_hide, "Share of edges to hide per run")
        ->capture_default_str();
    sweep_cmd->add_option("--eval-seed", sweep_seed, "Seed for splits and candidate sampling")
        ->capture_default_str();
    sweep_cmd->add_option("--out", sweep_out, "Output directory")->envname("DHNE_OUT");
    sweep_cmd->callback([&]() {
        status = run_sweep(sweep_cmd, sweep_graph, sweep_train, sweep_alpha_grid, sweep_dim_grid,
                           sweep_hide, sweep_seed, sweep_out);
    });

    // embed ----------------------------------------------------------------
    auto* embed_cmd = app.add_subcommand("embed", "Out-of-sample embeddings from adjacency rows");
    std::string embed_snapshot, embed_rows, embed_out;
    embed_cmd->add_option("--snapshot", embed_snapshot, "Trained parameter snapshot")
        ->required()
        ->check(CLI::ExistingFile);
    embed_cmd->add_option("--rows", embed_rows, "Row file: id<TAB>type<TAB>index:count ...")
        ->required()
        ->check(CLI::ExistingFile);
    embed_cmd->add_option("--out", embed_out, "Output file (stdout when omitted)");
    embed_cmd->callback([&]() { status = run_embed(embed_snapshot, embed_rows, embed_out); });

    // expand -----------------------------------------------------------------
    auto* expand_cmd = app.add_subcommand("expand", "Clique or star expansion of a hypergraph");
    GraphCliOpts expand_graph;
    std::string expand_mode, expand_out;
    add_graph_options(expand_cmd, expand_graph);
    expand_cmd->add_option("--mode", expand_mode, "clique or star")->required();
    expand_cmd->add_option("--out", expand_out, "Output file (stdout when omitted)");
    expand_cmd->callback([&]() { status = run_expand(expand_graph, expand_mode, expand_out); });

    // gen ----------------------------------------------------------------------
    auto* gen_cmd = app.add_subcommand("gen", "Synthetic data generators");
    gen_cmd->require_subcommand(1);
    auto* planted_cmd = gen_cmd->add_subcommand("planted", "Planted-cluster hypergraph");
    uint32_t gen_nodes = 30, gen_clusters = 4, gen_edges = 600;
    double gen_noise = 0.05;
    uint64_t gen_seed = 1;
    std::string gen_out;
    planted_cmd->add_option("--nodes-per-type", gen_nodes, "Nodes per type")
        ->capture_default_str();
    planted_cmd->add_option("--clusters", gen_clusters, "Cluster count")->capture_default_str();
    planted_cmd->add_option("--num-edges", gen_edges, "Edges to draw before dedup")
        ->capture_default_str();
    planted_cmd->add_option("--noise", gen_noise, "Share of unconstrained edges")
        ->capture_default_str();
    planted_cmd->add_option("--seed", gen_seed, "Random seed")
        ->envname("DHNE_SEED")
        ->capture_default_str();
    planted_cmd->add_option("--out", gen_out, "Output triplet file (stdout when omitted)");
    planted_cmd->callback([&]() {
        status = run_gen_planted(gen_nodes, gen_clusters, gen_edges, gen_noise, gen_seed, gen_out);
    });

    // gradcheck -------------------------------------------------------------
    auto* grad_cmd =
        app.add_subcommand("gradcheck", "Verify analytic gradients against finite differences");
    size_t grad_instances = 20;
    uint64_t grad_seed = 1;
    double grad_tolerance = 1e-4;
    grad_cmd->add_option("--instances", grad_instances, "Random instances to check")
        ->capture_default_str();
    grad_cmd->add_option("--seed", grad_seed, "Random seed")
        ->envname("DHNE_SEED")
        ->capture_default_str();
    grad_cmd->add_option("--tolerance", grad_tolerance, "Max relative discrepancy allowed")
        ->capture_default_str();
    grad_cmd->callback([&]() { status = run_gradcheck(grad_instances, grad_seed, grad_tolerance); });

    // oracle -------------------------------------------------------------------
    auto* oracle_cmd = app.add_subcommand("oracle", "Feasibility oracles");
    oracle_cmd->require_subcommand(1);
    auto* th_cmd = oracle_cmd->add_subcommand(
        "theorem1", "Can an additive scorer separate the 2-cluster construction?");
    double th_l = 0.0, th_s = 0.0, th_wbound = 10.0, th_ebound = 10.0;
    th_cmd->add_option("--l", th_l, "Threshold edges must exceed")->required();
    th_cmd->add_option("--s", th_s, "Threshold non-edges must stay below")->required();
    th_cmd->add_option("--weight-bound", th_wbound, "Max |weight|")->capture_default_str();
    th_cmd->add_option("--embedding-bound", th_ebound, "Max |cluster embedding|")
        ->capture_default_str();
    th_cmd->callback([&]() { status = run_oracle(th_l, th_s, th_wbound, th_ebound); });

    // bench -----------------------------------------------------------------
    auto* bench_cmd = app.add_subcommand("bench", "Benchmarks");
    bench_cmd->require_subcommand(1);
    auto* timing_cmd = bench_cmd->add_subcommand("timing", "Per-batch time vs node count");
    std::string bench_sizes = "200,400,800,1600", bench_out;
    TrainCliOpts bench_train;
    bench_train.dim = 16;
    size_t bench_warmup = 3, bench_timed = 20;
    timing_cmd->add_option("--sizes", bench_sizes, "Comma-separated node counts")
        ->capture_default_str();
    add_train_options(timing_cmd, bench_train);
    timing_cmd->add_option("--warmup", bench_warmup, "Warmup batches per size")
        ->capture_default_str();
    timing_cmd->add_option("--timed", bench_timed, "Timed batches per size")
        ->capture_default_str();
    timing_cmd->add_option("--out", bench_out, "Output file for the timing table");
    timing_cmd->callback([&]() {
        status = run_bench(bench_sizes, bench_train, bench_warmup, bench_timed, bench_out);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return status;
}
