#include "dpb/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>

#include "dpb/baselines.hpp"
#include "dpb/qnet.hpp"
#include "dpb/rng.hpp"
#include "dpb/textio.hpp"

namespace dpb {

namespace {
constexpr std::uint64_t kDropSalt = 0xd109u;
}

void save_drops(const std::vector<UeDrop>& drops, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write drops file " + path);
    out << "dropsv1\n";
    for (const auto& d : drops) {
        out << d.drop_id << ',' << d.seed;
        for (const auto& p : d.positions)
            out << ',' << format_double(p.x) << ',' << format_double(p.y);
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed on drops file " + path);
}

std::vector<UeDrop> load_drops(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read drops file " + path);
    std::string line;
    if (!std::getline(in, line) || line != "dropsv1")
        throw std::runtime_error(path + ": missing dropsv1 header");
    std::vector<UeDrop> drops;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split(line, ',');
        if (fields.size() < 4 || fields.size() % 2 != 0)
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": malformed drop");
        UeDrop d;
        try {
            d.drop_id = std::stoi(fields[0]);
            d.seed = std::stoull(fields[1]);
            for (std::size_t i = 2; i + 1 < fields.size(); i += 2)
                d.positions.push_back({parse_double(fields[i]), parse_double(fields[i + 1])});
        } catch (const std::invalid_argument& ex) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + ex.what());
        }
        drops.push_back(std::move(d));
    }
    return drops;
}

std::vector<UeDrop> generate_drops(const ExperimentConfig& cfg) {
    const auto dep = deploy(cfg.deployment);
    std::vector<UeDrop> drops;
    drops.reserve(cfg.n_drops);
    for (int d = 0; d < cfg.n_drops; ++d) {
        const std::uint64_t seed = mix64(mix64(cfg.seed, kDropSalt), static_cast<std::uint64_t>(d));
        drops.push_back(drop_ues(dep, cfg.sim, cfg.n_ue, seed, d));
    }
    return drops;
}

void cmd_drops(const ExperimentConfig& cfg) {
    save_drops(generate_drops(cfg), cfg.drops_path);
}

void cmd_explore(const ExperimentConfig& cfg, bool parallel) {
    const auto dep = deploy(cfg.deployment);
    const auto drops = load_drops(cfg.drops_path);
    const auto store = parallel ? explore_drops_parallel(dep, cfg.sim, drops)
                                : explore_drops_serial(dep, cfg.sim, drops);
    store.save(cfg.rem_path);
}

void cmd_train(const ExperimentConfig& cfg) {
    const auto dep = deploy(cfg.deployment);
    const auto rem = RemStore::load(cfg.rem_path);

    const int input_dim = 3 * (dep.n_pbs() + 1);
    const std::vector<int> dims{input_dim, 16, 64, 128, 64, dep.n_patterns()};
    QNetwork net(dims, cfg.seed);
    const auto result = train(net, rem, cfg.train_steps, cfg.batch_size, cfg.seed);
    net.save(cfg.model_path);

    std::ofstream trace(cfg.model_path + ".loss");
    if (!trace) throw std::runtime_error("cannot write loss trace " + cfg.model_path + ".loss");
    trace << "step,loss\n";
    for (const auto& [step, loss] : result.loss_trace)
        trace << step << ',' << format_double(loss) << '\n';
}

std::vector<DropReport> cmd_evaluate(const ExperimentConfig& cfg, bool parallel) {
    const auto dep = deploy(cfg.deployment);
    const auto drops = load_drops(cfg.drops_path);
    const auto net = QNetwork::load(cfg.model_path);
    const auto rem = RemStore::load(cfg.rem_path);

    const int n_drops = static_cast<int>(drops.size());
    std::vector<DropReport> reports(n_drops);

#pragma omp parallel for schedule(dynamic) if (parallel)
    for (int d = 0; d < n_drops; ++d) {
        const auto& drop = drops[d];
        const auto state = drop_state(dep, drop);
        const std::vector<std::pair<std::string, MutingPattern>> choices{
            {"no_dpb", no_dpb(dep)},
            {"ref", ref_csi(dep, cfg.sim, drop)},
            {"es", rem.best_pattern(drop.drop_id, dep.n_pbs())},
            {"dqn", act_greedy(net, state)},
        };
        DropReport report;
        report.drop_id = drop.drop_id;
        for (const auto& [name, pattern] : choices) {
            const auto result = evaluate_pattern(dep, cfg.sim, drop, pattern);
            report.algos.push_back({name, pattern, result.cell_edge_tput, result.mean_tput,
                                    reward(result, cfg.sim.reward_scale_bps)});
        }
        reports[d] = std::move(report);
    }

    write_reports(reports, cfg.report_dir);
    return reports;
}

void write_reports(const std::vector<DropReport>& reports, const std::string& report_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(report_dir);

    std::ofstream table(fs::path(report_dir) / "evaluation.csv");
    if (!table) throw std::runtime_error("cannot write evaluation table in " + report_dir);
    table << "drop_id,algorithm,pattern,cell_edge_bps,mean_bps,reward\n";
    for (const auto& rep : reports)
        for (const auto& a : rep.algos)
            table << rep.drop_id << ',' << a.algorithm << ',' << a.pattern << ','
                  << format_double(a.cell_edge_bps) << ',' << format_double(a.mean_bps) << ','
                  << format_double(a.reward) << '\n';

    const std::vector<std::string> algos{"no_dpb", "ref", "es", "dqn"};
    std::map<std::string, std::vector<double>> cell_edge, mean_tput;
    for (const auto& rep : reports)
        for (const auto& a : rep.algos) {
            cell_edge[a.algorithm].push_back(a.cell_edge_bps);
            mean_tput[a.algorithm].push_back(a.mean_bps);
        }

    std::ofstream cdf(fs::path(report_dir) / "cdf.csv");
    if (!cdf) throw std::runtime_error("cannot write cdf file in " + report_dir);
    cdf << "algorithm,cell_edge_bps,cdf\n";
    for (const auto& name : algos) {
        auto values = cell_edge[name];
        std::sort(values.begin(), values.end());
        for (std::size_t i = 0; i < values.size(); ++i)
            cdf << name << ',' << format_double(values[i]) << ','
                << format_double(static_cast<double>(i + 1) / values.size()) << '\n';
    }

    const auto avg = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x;
        return v.empty() ? 0.0 : s / v.size();
    };

    std::ofstream summary(fs::path(report_dir) / "summary.csv");
    if (!summary) throw std::runtime_error("cannot write summary file in " + report_dir);
    summary << "algorithm,avg_cell_edge_bps,avg_mean_bps,cell_edge_gain_vs_no_dpb,"
               "mean_gain_vs_no_dpb\n";
    const double base_edge = avg(cell_edge["no_dpb"]);
    const double base_mean = avg(mean_tput["no_dpb"]);
    for (const auto& name : algos) {
        const double edge = avg(cell_edge[name]);
        const double mean = avg(mean_tput[name]);
        summary << name << ',' << format_double(edge) << ',' << format_double(mean) << ','
                << format_double(base_edge > 0.0 ? edge / base_edge - 1.0 : 0.0) << ','
                << format_double(base_mean > 0.0 ? mean / base_mean - 1.0 : 0.0) << '\n';
    }
    const double es_edge = avg(cell_edge["es"]);
    summary << "ratio_dqn_over_es,"
            << format_double(es_edge > 0.0 ? avg(cell_edge["dqn"]) / es_edge : 0.0)
            << ",,,\n";
}

std::vector<DropReport> load_evaluation_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read evaluation table " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("drop_id,", 0) != 0)
        throw std::runtime_error(path + ": missing evaluation header");
    std::vector<DropReport> reports;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split(line, ',');
        if (fields.size() != 6)
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": malformed row");
        AlgoResult a;
        const int drop_id = std::stoi(fields[0]);
        a.algorithm = fields[1];
        a.pattern = static_cast<MutingPattern>(std::stoul(fields[2]));
        a.cell_edge_bps = parse_double(fields[3]);
        a.mean_bps = parse_double(fields[4]);
        a.reward = parse_double(fields[5]);
        if (reports.empty() || reports.back().drop_id != drop_id)
            reports.push_back({drop_id, {}});
        reports.back().algos.push_back(std::move(a));
    }
    return reports;
}

void cmd_report(const ExperimentConfig& cfg) {
    namespace fs = std::filesystem;
    const auto table_path = (fs::path(cfg.report_dir) / "evaluation.csv").string();
    write_reports(load_evaluation_table(table_path), cfg.report_dir);
}

}  // namespace dpb
