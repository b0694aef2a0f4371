#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "odinsim/analysis.hpp"
#include "odinsim/campaign.hpp"
#include "odinsim/config.hpp"
#include "odinsim/dump.hpp"
#include "odinsim/error.hpp"
#include "odinsim/faultsim.hpp"
#include "odinsim/idx.hpp"
#include "odinsim/io.hpp"
#include "odinsim/plasticity.hpp"
#include "odinsim/stats.hpp"

namespace fs = std::filesystem;
using namespace odinsim;

namespace
{

struct Globals
{
    std::string config_path;
    std::string data_dir;
    std::vector<std::string> settings;
};

SimConfig resolve_config(const Globals &g)
{
    std::string path = g.config_path;
    if (path.empty())
    {
        if (const char *env = std::getenv("NN_CONFIG"); env != nullptr)
        {
            path = env;
        }
    }
    SimConfig cfg = path.empty() ? SimConfig{} : load_config(path);
    for (const auto &s : g.settings)
    {
        const auto eq = s.find('=');
        if (eq == std::string::npos)
        {
            throw Error("--set expects key=value, got '" + s + "'");
        }
        apply_setting(cfg, s.substr(0, eq), s.substr(eq + 1));
    }
    cfg.validate();
    return cfg;
}

fs::path resolve_data_dir(const Globals &g)
{
    if (!g.data_dir.empty())
    {
        return g.data_dir;
    }
    if (const char *env = std::getenv("NN_DATA_DIR"); env != nullptr && *env != '\0')
    {
        return env;
    }
    throw Error("no dataset directory: pass --data-dir or set NN_DATA_DIR");
}

struct Datasets
{
    InputSet train;
    InputSet epoch;
    InputSet eval;
};

std::size_t n_classes_of(const InputSet &set)
{
    std::size_t n = 0;
    for (const auto l : set.labels)
    {
        n = std::max<std::size_t>(n, l + 1U);
    }
    return n;
}

// Synthetic runs use the same toy set for every role.
Datasets load_datasets(const Globals &g, const SimConfig &cfg, std::size_t synthetic, bool need_train,
                       bool need_epoch)
{
    Datasets d;
    if (synthetic > 0)
    {
        d.train = make_synthetic_set(synthetic, 20, cfg.pretrain.seed);
        d.epoch = d.train;
        d.eval = d.train;
        return d;
    }
    const auto files = mnist_files(resolve_data_dir(g));
    if (need_train || need_epoch)
    {
        const auto train = load_image_set(files.train_images, files.train_labels);
        if (need_train)
        {
            d.train = prepare_inputs(train, cfg.data.train_offset, cfg.data.train_count);
        }
        if (need_epoch)
        {
            d.epoch = prepare_inputs(train, cfg.data.epoch_offset, cfg.data.epoch_count);
        }
    }
    const auto test = load_image_set(files.test_images, files.test_labels);
    d.eval = prepare_inputs(test, cfg.data.eval_offset, cfg.data.eval_count);
    return d;
}

fs::path labels_path(const fs::path &weights)
{
    auto p = weights;
    p += ".labels";
    return p;
}

void save_network(const fs::path &path, const Network &net, std::uint64_t seed)
{
    write_dump(path, dump(net.memory, seed));
    std::string text;
    for (std::size_t j = 0; j < net.label_map.size(); ++j)
    {
        text += (j == 0 ? "" : " ") + std::to_string(net.label_map[j]);
    }
    write_file_atomic(labels_path(path), text + "\n");
}

Network load_network(const fs::path &path, const SimConfig &cfg)
{
    Network net(cfg.network);
    net.memory = load(read_dump(path));
    if (net.memory.n_pre() != cfg.network.n_inputs || net.memory.n_post() != cfg.network.n_post)
    {
        throw Error(path.string() + ": crossbar geometry does not match the network config");
    }
    const auto lp = labels_path(path);
    if (fs::exists(lp))
    {
        std::ifstream in(lp);
        std::vector<int> map;
        int v = 0;
        while (in >> v)
        {
            map.push_back(v);
        }
        if (map.size() != cfg.network.n_outputs)
        {
            throw Error(lp.string() + ": expected " + std::to_string(cfg.network.n_outputs) + " labels");
        }
        net.label_map = map;
    }
    else
    {
        std::fprintf(stderr, "odinsim: %s not found; using the teacher map (neuron j -> class j mod 10)\n",
                     lp.string().c_str());
        for (std::size_t j = 0; j < cfg.network.n_outputs; ++j)
        {
            net.label_map.push_back(static_cast<int>(j % 10));
        }
    }
    return net;
}

void print_accuracy(const char *what, const EvalResult &r)
{
    std::printf("%s accuracy %.4f (%zu/%zu, %zu no-decision)\n", what, r.accuracy(), r.correct, r.total,
                r.no_decision);
}

Network pretrain_network(const SimConfig &cfg, const InputSet &train, LabelAssignment *labels = nullptr)
{
    Network net(cfg.network);
    auto la = pretrain(net, train, cfg.sdsp, cfg.pretrain);
    if (labels != nullptr)
    {
        *labels = la;
    }
    return net;
}

int cmd_pretrain(const Globals &g, const std::string &out, std::size_t synthetic)
{
    const auto cfg = resolve_config(g);
    const auto data = load_datasets(g, cfg, synthetic, true, false);
    LabelAssignment la;
    const Network net = pretrain_network(cfg, data.train, &la);
    save_network(out, net, cfg.pretrain.seed);
    std::printf("pretrained on %zu images, %zu passes\n", data.train.size(), cfg.pretrain.passes);
    std::printf("label map:");
    for (const int m : net.label_map)
    {
        std::printf(" %d", m);
    }
    std::printf("\n");
    if (!la.silent.empty())
    {
        std::printf("silent neurons:");
        for (const auto j : la.silent)
        {
            std::printf(" %zu", j);
        }
        std::printf("\n");
    }
    print_accuracy(synthetic > 0 ? "training-set" : "held-out", evaluate(net, data.eval, cfg.campaign.eval_seed));
    return 0;
}

int cmd_eval(const Globals &g, const std::string &weights, std::size_t synthetic)
{
    const auto cfg = resolve_config(g);
    const auto data = load_datasets(g, cfg, synthetic, false, false);
    const Network net = load_network(weights, cfg);
    print_accuracy("eval", evaluate(net, data.eval, cfg.campaign.eval_seed));
    return 0;
}

struct CampaignFlags
{
    std::string weights;
    std::string out_dir;
    std::string events;
    std::optional<std::size_t> periods;
    std::optional<double> period_hours;
    std::optional<std::size_t> seeds;
    std::optional<std::uint64_t> base_seed;
    std::optional<std::string> learning;
    std::optional<std::string> tmr;
    std::optional<double> rate;
    std::optional<double> mttu;
    std::size_t synthetic = 0;
    bool serial = false;
};

void apply_rate(FaultModel &model, std::optional<double> rate, std::optional<double> mttu)
{
    if (mttu)
    {
        model.mttu_s = *mttu;
    }
    if (rate)
    {
        if (*rate < 0.0)
        {
            throw Error("--rate must be non-negative");
        }
        if (*rate > 0.0)
        {
            model.mttu_s = 1.0 / *rate;
        }
        else
        {
            model.mttu_s = 0.0;
            model.flux = 0.0;
        }
    }
}

int cmd_campaign(const Globals &g, const CampaignFlags &f)
{
    auto cfg = resolve_config(g);
    if (f.periods)
    {
        cfg.campaign.n_periods = *f.periods;
    }
    if (f.period_hours)
    {
        cfg.campaign.period_hours = *f.period_hours;
    }
    if (f.seeds)
    {
        cfg.campaign.n_seeds = *f.seeds;
    }
    if (f.base_seed)
    {
        cfg.campaign.base_seed = *f.base_seed;
    }
    if (f.learning)
    {
        apply_setting(cfg, "campaign.learning", *f.learning);
    }
    if (f.tmr)
    {
        apply_setting(cfg, "campaign.tmr", *f.tmr);
    }
    apply_rate(cfg.fault, f.rate, f.mttu);
    cfg.validate();

    const auto data = load_datasets(g, cfg, f.synthetic, f.weights.empty(), cfg.campaign.learning);
    const Network baseline = f.weights.empty() ? pretrain_network(cfg, data.train) : load_network(f.weights, cfg);
    const std::uint64_t hash = config_hash(cfg);

    std::vector<std::string> event_text(cfg.campaign.n_seeds);
    EventSink sink;
    if (!f.events.empty())
    {
        sink = [&](std::uint64_t seed, std::size_t period, const InjectionResult &r) {
            std::ostringstream os;
            write_events_csv(os, r.events, seed, period);
            event_text[seed - cfg.campaign.base_seed] += os.str();
        };
    }
    const CampaignData cd{&data.eval, cfg.campaign.learning ? &data.epoch : nullptr, cfg.epoch_sdsp,
                          std::max<std::size_t>(n_classes_of(data.eval), 1)};
    const auto logs = f.serial ? run_campaign_serial(baseline, cfg.fault, cfg.campaign, cd, hash, sink)
                               : run_campaign(baseline, cfg.fault, cfg.campaign, cd, hash, sink);
    const auto agg = aggregate(logs);

    fs::create_directories(f.out_dir);
    export_csv(fs::path(f.out_dir) / "runs.csv", logs);
    export_csv(fs::path(f.out_dir) / "aggregate.csv", agg);
    write_file_atomic(fs::path(f.out_dir) / "config.txt", to_config_text(cfg));
    if (!f.events.empty())
    {
        std::ostringstream os;
        write_events_csv_header(os);
        for (const auto &t : event_text)
        {
            os << t;
        }
        write_file_atomic(f.events, os.str());
    }

    const auto &end = agg.end_of_run();
    std::printf("config hash %016" PRIx64 ", %zu seeds, %zu periods of %g h, learning %s, tmr %s\n", hash,
                logs.size(), cfg.campaign.n_periods, cfg.campaign.period_hours, cfg.campaign.learning ? "on" : "off",
                cfg.campaign.tmr ? "on" : "off");
    std::printf("baseline accuracy mean %.4f\n", agg.periods.front().mean);
    std::printf("end-of-run accuracy after %g h: min %.4f mean %.4f max %.4f\n", end.equivalent_hours, end.min,
                end.mean, end.max);
    return 0;
}

struct InjectFlags
{
    std::string weights;
    std::string out;
    std::string events;
    double hours = 1.0;
    std::optional<std::string> scope;
    std::optional<double> mttu;
    std::optional<std::uint64_t> seed;
    std::size_t repeat = 1;
    bool tmr = false;
};

int cmd_inject(const Globals &g, const InjectFlags &f)
{
    auto cfg = resolve_config(g);
    if (f.scope)
    {
        cfg.fault.scope = parse_scope(*f.scope);
        if (!f.mttu && cfg.fault.scope == FaultScope::full_memory && cfg.fault.mttu_s == kReferenceMttuRelevantS)
        {
            cfg.fault.mttu_s = kReferenceMttuFullS;
        }
    }
    apply_rate(cfg.fault, std::nullopt, f.mttu);
    if (f.seed)
    {
        cfg.fault.seed = *f.seed;
    }
    if (f.repeat == 0)
    {
        throw Error("--repeat must be at least 1");
    }
    cfg.validate();

    const SynapticMemory original =
        f.weights.empty() ? SynapticMemory(cfg.network.n_inputs, cfg.network.n_post) : load(read_dump(f.weights));
    const BitScope scope{original.n_pre(), original.n_post(), cfg.network.n_outputs, cfg.fault.scope};

    std::ostringstream events;
    write_events_csv_header(events);
    SynapticMemory last = original;
    std::size_t total = 0;
    for (std::size_t r = 0; r < f.repeat; ++r)
    {
        auto rng = fault_stream(cfg.fault, r, 0);
        InjectionResult res;
        if (f.tmr)
        {
            TmrMemory tmr(original);
            res = inject_period(tmr, cfg.fault, scope, f.hours, 0.0, rng);
            last = tmr.voted();
        }
        else
        {
            last = original;
            res = inject_period(last, cfg.fault, scope, f.hours, rng);
        }
        total += res.flips;
        write_events_csv(events, res.events, r, 0);
    }

    if (!f.out.empty())
    {
        write_dump(f.out, dump(last, cfg.fault.seed));
    }
    if (!f.events.empty())
    {
        write_file_atomic(f.events, events.str());
    }
    const double rate = upset_rate(cfg.fault);
    if (f.repeat == 1)
    {
        std::printf("%zu flips\n", total);
    }
    else
    {
        std::printf("mean %.4f flips per run over %zu runs\n", static_cast<double>(total) / static_cast<double>(f.repeat),
                    f.repeat);
    }
    std::printf("expected %.4f flips per run (%g h, mttu %g s, %s scope)\n", rate * f.hours * 3600.0, f.hours,
                mean_time_to_upset(cfg.fault), to_string(cfg.fault.scope).c_str());
    return 0;
}

int cmd_dump(const std::string &file)
{
    const auto d = read_dump(file);
    const auto m = load(d);
    std::printf("magic ODMP version %u\n", static_cast<unsigned>(d.header.version));
    std::printf("geometry %u x %u x %u bits\n", static_cast<unsigned>(d.header.n_pre),
                static_cast<unsigned>(d.header.n_post), static_cast<unsigned>(d.header.bits_per_entry));
    std::printf("seed %" PRIu64 " timestamp %" PRIu64 "\n", d.header.seed, d.header.timestamp_s);
    std::printf("payload %zu bytes, %zu bits set, hash %016" PRIx64 "\n", d.payload.size(), m.popcount(), m.hash());
    return 0;
}

int cmd_diff(const std::string &a, const std::string &b, const std::string &csv, bool positions)
{
    const auto da = read_dump(a);
    const auto db = read_dump(b);
    const auto d = diff(da, db);
    std::printf("%zu flips\n", d.count);
    const auto m = load(da);
    if (positions)
    {
        for (const auto p : d.positions)
        {
            std::printf("%" PRIu64 "\n", p);
        }
    }
    if (!csv.empty())
    {
        std::string text = "bit_index,pre,post,offset\n";
        for (const auto p : d.positions)
        {
            const auto ad = m.address(p);
            text += std::to_string(p) + "," + std::to_string(ad.pre) + "," + std::to_string(ad.post) + "," +
                    std::to_string(ad.offset) + "\n";
        }
        write_file_atomic(csv, text);
    }
    return 0;
}

int cmd_xsection(double n_errors, double fluence)
{
    std::printf("%s cm^2\n", format_sig(cross_section(n_errors, fluence)).c_str());
    return 0;
}

int cmd_report(const Globals &g, const std::string &runs)
{
    const auto cfg = resolve_config(g);
    const std::size_t total = cfg.network.n_inputs * cfg.network.n_post * kBitsPerEntry;
    const double eta = relevant_fraction(cfg.network.n_outputs, cfg.network.n_inputs, kBitsPerEntry, total);
    std::printf("relevant bits %zu of %zu, eta %.5f%%\n", cfg.network.n_inputs * cfg.network.n_outputs * kBitsPerEntry,
                total, eta * 100.0);
    std::printf("\n%-16s %8s %10s %10s %10s %10s\n", "run", "runtime", "fluence", "flux", "mttu_full", "mttu_rel");
    for (const auto &row : fluence_report(cfg.ledger))
    {
        const double full = 1.0 / (cfg.fault.sigma * row.flux);
        std::printf("%-16s %8s %10s %10s %10s %10s\n", row.entry.name.c_str(),
                    format_runtime(row.entry.runtime_s).c_str(), format_sig(row.entry.fluence).c_str(),
                    format_sig(row.flux).c_str(), format_sig(full).c_str(), format_sig(full / eta).c_str());
    }
    std::printf("\nsigma %s cm^2; reference mttu %g s full, %g s relevant (%.3f flips/h)\n",
                format_sig(cfg.fault.sigma).c_str(), kReferenceMttuFullS, kReferenceMttuRelevantS,
                3600.0 / kReferenceMttuRelevantS);
    if (!runs.empty())
    {
        const auto agg = aggregate(import_runs_csv(runs));
        std::printf("\n%6s %8s %4s %8s %8s %8s %8s\n", "period", "hours", "n", "min", "mean", "max", "stddev");
        for (const auto &s : agg.periods)
        {
            std::printf("%6zu %8g %4zu %8.4f %8.4f %8.4f %8.4f\n", s.period, s.equivalent_hours, s.n, s.min, s.mean,
                        s.max, s.stddev);
        }
    }
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"odinsim: SNN fault-injection simulator with SDSP learning and TMR"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--config", g.config_path, "key=value config file (default: $NN_CONFIG)");
    app.add_option("--data-dir", g.data_dir, "directory with the MNIST IDX files (default: $NN_DATA_DIR)");
    app.add_option("--set", g.settings, "override one config key, e.g. --set campaign.n_seeds=10");

    std::string out;
    std::string weights;
    std::size_t synthetic = 0;
    auto *pre = app.add_subcommand("pretrain", "teacher-train a baseline network and write its weights");
    pre->add_option("--out", out, "weight dump to write (labels go to <out>.labels)")->required();
    pre->add_option("--synthetic", synthetic, "use an N-class synthetic set instead of MNIST");

    auto *ev = app.add_subcommand("eval", "evaluate a weight dump on the evaluation set");
    ev->add_option("--weights", weights, "weight dump")->required();
    ev->add_option("--synthetic", synthetic, "use an N-class synthetic set instead of MNIST");

    CampaignFlags cf;
    auto *camp = app.add_subcommand("campaign", "run a period-based fault-injection campaign");
    camp->add_option("--weights", cf.weights, "baseline weight dump (default: pretrain from the config)");
    camp->add_option("--out-dir", cf.out_dir, "directory for runs.csv, aggregate.csv and config.txt")->required();
    camp->add_option("--periods", cf.periods, "number of periods");
    camp->add_option("--period-hours", cf.period_hours, "equivalent exposure per period");
    camp->add_option("--seeds", cf.seeds, "number of independent runs");
    camp->add_option("--base-seed", cf.base_seed, "seed of the first run");
    camp->add_option("--learning", cf.learning, "unsupervised epoch after each period")
        ->check(CLI::IsMember({"on", "off"}));
    camp->add_option("--tmr", cf.tmr, "triple modular redundancy")->check(CLI::IsMember({"on", "off"}));
    camp->add_option("--rate", cf.rate, "upset rate in events/s over the fault scope (0 disables faults)");
    camp->add_option("--mttu", cf.mttu, "mean time to upset in seconds");
    camp->add_option("--events", cf.events, "write every injected event to this CSV");
    camp->add_option("--synthetic", cf.synthetic, "use an N-class synthetic set instead of MNIST");
    camp->add_flag("--serial", cf.serial, "run seeds one after another");

    InjectFlags inf;
    auto *inj = app.add_subcommand("inject", "inject one period of upsets into a weight dump");
    inj->add_option("--weights", inf.weights, "weight dump (default: all-zero crossbar)");
    inj->add_option("--out", inf.out, "write the mutated dump (last run) here");
    inj->add_option("--hours", inf.hours, "exposure in hours")->required();
    inj->add_option("--scope", inf.scope, "relevant or full")->check(CLI::IsMember({"relevant", "full"}));
    inj->add_option("--mttu", inf.mttu, "mean time to upset in seconds");
    inj->add_option("--seed", inf.seed, "fault model seed");
    inj->add_option("--repeat", inf.repeat, "independent runs; prints the mean flip count");
    inj->add_option("--events", inf.events, "write injected events to this CSV");
    inj->add_flag("--tmr", inf.tmr, "inject into a TMR-protected copy and write its voted memory");

    std::string dump_file;
    auto *dmp = app.add_subcommand("dump", "print the header and summary of a dump file");
    dmp->add_option("file", dump_file, "dump file")->required();

    std::string diff_a;
    std::string diff_b;
    std::string diff_csv;
    bool diff_positions = false;
    auto *dif = app.add_subcommand("diff", "count bit flips between two dumps");
    dif->add_option("a", diff_a, "first dump")->required();
    dif->add_option("b", diff_b, "second dump")->required();
    dif->add_option("--csv", diff_csv, "write flipped positions to this CSV");
    dif->add_flag("--positions", diff_positions, "print every flipped bit index");

    double n_errors = 0.0;
    double fluence = 0.0;
    auto *xs = app.add_subcommand("xsection", "SEU cross-section from an error count and a fluence");
    xs->add_option("errors", n_errors, "observed bit errors")->required();
    xs->add_option("fluence", fluence, "fluence in particles/cm^2")->required();

    std::string runs;
    auto *rep = app.add_subcommand("report", "fluence ledger, derived flux and upset times; optional campaign table");
    rep->add_option("--runs", runs, "runs.csv of a campaign to aggregate");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*pre)
        {
            return cmd_pretrain(g, out, synthetic);
        }
        if (*ev)
        {
            return cmd_eval(g, weights, synthetic);
        }
        if (*camp)
        {
            return cmd_campaign(g, cf);
        }
        if (*inj)
        {
            return cmd_inject(g, inf);
        }
        if (*dmp)
        {
            return cmd_dump(dump_file);
        }
        if (*dif)
        {
            return cmd_diff(diff_a, diff_b, diff_csv, diff_positions);
        }
        if (*xs)
        {
            return cmd_xsection(n_errors, fluence);
        }
        if (*rep)
        {
            return cmd_report(g, runs);
        }
    }
    catch (const std::exception &e)
    {
        std::fprintf(stderr, "odinsim: error: %s\n", e.what());
        return 1;
    }
    return 0;
}
