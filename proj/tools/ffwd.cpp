// ffwd: semantic fast-forward frame selection over descriptor containers.
//
// Subcommands: synth, segment, sample, smooth, fillgap, metrics, run, ablate.
// Exit codes: 0 ok, 1 usage, 2 I/O failure, 3 invariant violation,
// 4 infeasible rate plan.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ffwd/ffwd.hpp"

namespace {

using namespace ffwd;

SamplerMethod parse_method(const std::string& name) {
    if (name == "llc") return SamplerMethod::LLC;
    if (name == "sc") return SamplerMethod::SC;
    if (name == "omp") return SamplerMethod::OMP;
    throw CLI::ValidationError("--sampler", "expected llc, sc, or omp");
}

struct CommonFlags {
    std::string input;
    std::string sampler = "llc";
    double speedup = 10.0;
    double lambda_scale = 0.01;
    int spf = 2;
    int levels = 2;
    int smooth_radius = 15;
    std::uint32_t min_seg_len = 0;
    std::size_t metrics_window = 4;
    int threads = 0;
    bool no_fill = false;
};

PipelineConfig to_config(const CommonFlags& f) {
    PipelineConfig c;
    c.required_speedup = f.speedup;
    c.sampler.method = parse_method(f.sampler);
    c.sampler.lambda_scale = f.lambda_scale;
    c.spf = f.spf;
    c.fill_gaps = !f.no_fill;
    c.levels = f.levels;
    c.smooth_radius = f.smooth_radius;
    c.min_seg_len = f.min_seg_len;
    c.metrics_window = f.metrics_window;
    c.threads = f.threads;
    return c;
}

void add_plan_flags(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--speedup", f.speedup, "required speed-up S_d");
    cmd->add_option("--levels", f.levels, "importance levels for semantic segments");
    cmd->add_option("--min-seg-len", f.min_seg_len,
                    "minimum segment length in frames (0 = 2*speedup)");
    cmd->add_option("--smooth-radius", f.smooth_radius,
                    "profile moving-average radius in frames");
}

void add_sampler_flags(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--sampler", f.sampler, "llc | sc | omp");
    cmd->add_option("--lambda-scale", f.lambda_scale,
                    "lambda = scale * trace(D'D)/n");
    cmd->add_option("--spf", f.spf, "speed-up multiplication factor");
}

RatePlan plan_from_flags(const VideoRecord& video, const CommonFlags& flags) {
    const PipelineConfig config = to_config(flags);
    const auto profile = build_profile(video, config.smooth_radius);
    auto segments =
        segment_profile(profile, config.levels, default_min_seg_len(config));
    return assign_rates(std::move(segments), config.required_speedup);
}

int run_synth(const std::string& config_path, const std::string& out) {
    const ScenarioSpec spec = load_scenario(config_path);
    write_container(generate(spec), out);
    return 0;
}

int run_segment(const CommonFlags& flags, const std::string& out) {
    const VideoRecord video = read_container(flags.input);
    const RatePlan plan = plan_from_flags(video, flags);
    write_text(out, encode_rate_plan(plan));
    if (!plan.feasible) {
        std::cerr << "InfeasibleRates: best-effort plan written to " << out << "\n";
        return 4;
    }
    return 0;
}

int run_sample(const CommonFlags& flags, const std::string& plan_path,
               const std::string& out) {
    const VideoRecord video = read_container(flags.input);
    const RatePlan plan = read_text(plan_path, decode_rate_plan);
    const PipelineConfig config = to_config(flags);
    Selection sel;
    sel.required_speedup = plan.required_speedup;
    for (std::size_t s = 0; s < plan.segments.size(); ++s) {
        auto entries = sample_segment(video, plan.segments[s], static_cast<int>(s),
                                      config.sampler, config.spf);
        sel.entries.insert(sel.entries.end(), entries.begin(), entries.end());
    }
    write_text(out, encode_selection(sel));
    return 0;
}

std::vector<std::vector<SelectionEntry>> split_by_segment(const Selection& sel,
                                                          std::size_t count) {
    std::vector<std::vector<SelectionEntry>> per_segment(count);
    for (const auto& e : sel.entries) {
        if (e.segment_id < 0 || static_cast<std::size_t>(e.segment_id) >= count)
            throw invariant_error("selection references unknown segment id");
        per_segment[e.segment_id].push_back(e);
    }
    return per_segment;
}

int run_smooth(const CommonFlags& flags, const std::string& plan_path,
               const std::string& selection_path, const std::string& out) {
    const VideoRecord video = read_container(flags.input);
    const RatePlan plan = read_text(plan_path, decode_rate_plan);
    Selection sel = read_text(selection_path, decode_selection);
    auto per_segment = split_by_segment(sel, plan.segments.size());
    Selection smoothed;
    smoothed.required_speedup = sel.required_speedup;
    for (std::size_t s = 0; s < plan.segments.size(); ++s) {
        auto entries = smooth_segment(video, plan.segments[s], static_cast<int>(s),
                                      std::move(per_segment[s]),
                                      smoothing_target(plan.segments[s]));
        smoothed.entries.insert(smoothed.entries.end(), entries.begin(),
                                entries.end());
    }
    write_text(out, encode_selection(smoothed));
    return 0;
}

int run_fillgap(const CommonFlags& flags, const std::string& plan_path,
                const std::string& selection_path, const std::string& out) {
    const VideoRecord video = read_container(flags.input);
    const RatePlan plan = read_text(plan_path, decode_rate_plan);
    Selection sel = read_text(selection_path, decode_selection);
    const PipelineConfig config = to_config(flags);
    if (flags.no_fill) {
        std::sort(sel.entries.begin(), sel.entries.end(),
                  [](const SelectionEntry& a, const SelectionEntry& b) {
                      return a.frame < b.frame;
                  });
        write_text(out, encode_selection(sel));
        return 0;
    }
    const auto per_segment = split_by_segment(sel, plan.segments.size());
    const Selection filled =
        fill_all(video, plan, per_segment, config.sampler, config.spf);
    write_text(out, encode_selection(filled));
    return 0;
}

int run_metrics(const CommonFlags& flags, const std::string& selection_path,
                const std::string& plan_path, const std::string& out) {
    const VideoRecord video = read_container(flags.input);
    const Selection sel = read_text(selection_path, decode_selection);
    std::vector<double> rates;
    if (!plan_path.empty()) {
        const RatePlan plan = read_text(plan_path, decode_rate_plan);
        for (const auto& s : plan.segments) rates.push_back(s.speedup);
    }
    const MetricsReport report =
        evaluate(video, sel, rates, flags.metrics_window);
    const std::string text = encode_metrics(report, rates);
    if (out.empty())
        std::cout << text;
    else
        write_text(out, text);
    return 0;
}

int run_run(const CommonFlags& flags, const std::string& selection_out,
            const std::string& metrics_out) {
    const VideoRecord video = read_container(flags.input);
    const PipelineResult result = run_pipeline(video, to_config(flags));
    write_text(selection_out, encode_selection(result.selection));
    write_text(metrics_out,
               encode_metrics(result.metrics, result.effective_rates.rates));
    if (!result.plan.feasible) {
        std::cerr << "InfeasibleRates: pipeline ran with a best-effort plan\n";
        return 4;
    }
    return 0;
}

int run_ablate(const CommonFlags& flags, const std::vector<std::string>& methods,
               const std::string& out) {
    if (methods.size() < 2)
        throw CLI::ValidationError("--samplers", "need at least two methods");
    const VideoRecord video = read_container(flags.input);
    std::ostringstream table;
    table << "ffwd-report v1\nkind ablation\nrows " << methods.size() << "\n";
    table << "# method sampling_s selected speedup_dev semantic discontinuity "
             "instability\n";
    for (const auto& name : methods) {
        CommonFlags f = flags;
        f.sampler = name;
        const PipelineResult r = run_pipeline(video, to_config(f));
        char row[256];
        std::snprintf(row, sizeof(row), "%s %.6f %zu %.6f %.6f %.6f %s\n",
                      name.c_str(), r.sampling_seconds,
                      r.metrics.selected_count, r.metrics.speedup_deviation,
                      r.metrics.semantic_retained, r.metrics.discontinuity,
                      r.metrics.instability
                          ? std::to_string(*r.metrics.instability).c_str()
                          : "NotAvailable");
        table << row;
    }
    table << "end\n";
    if (out.empty())
        std::cout << table.str();
    else
        write_text(out, table.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"semantic fast-forward frame selection"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string config_path, out_path, plan_path, selection_path;
    std::string selection_out = "selection.txt", metrics_out = "metrics.txt";
    std::vector<std::string> ablate_methods = {"llc", "sc", "omp"};

    auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic container");
    synth_cmd->add_option("--config", config_path, "scenario config file")
        ->required();
    synth_cmd->add_option("--out", out_path, "output container path")->required();

    auto* segment_cmd =
        app.add_subcommand("segment", "build the semantic profile and rate plan");
    segment_cmd->add_option("--input", flags.input)->required();
    segment_cmd->add_option("--out", out_path, "rate plan file")->required();
    add_plan_flags(segment_cmd, flags);

    auto* sample_cmd = app.add_subcommand("sample", "per-segment sparse sampling");
    sample_cmd->add_option("--input", flags.input)->required();
    sample_cmd->add_option("--plan", plan_path)->required();
    sample_cmd->add_option("--out", out_path)->required();
    add_sampler_flags(sample_cmd, flags);

    auto* smooth_cmd =
        app.add_subcommand("smooth", "insert frames into shaky transitions");
    smooth_cmd->add_option("--input", flags.input)->required();
    smooth_cmd->add_option("--plan", plan_path)->required();
    smooth_cmd->add_option("--selection", selection_path)->required();
    smooth_cmd->add_option("--out", out_path)->required();

    auto* fill_cmd = app.add_subcommand("fillgap", "bridge inter-segment gaps");
    fill_cmd->add_option("--input", flags.input)->required();
    fill_cmd->add_option("--plan", plan_path)->required();
    fill_cmd->add_option("--selection", selection_path)->required();
    fill_cmd->add_option("--out", out_path)->required();
    fill_cmd->add_flag("--no-fill", flags.no_fill, "pass the selection through");
    add_sampler_flags(fill_cmd, flags);

    auto* metrics_cmd = app.add_subcommand("metrics", "evaluate a selection");
    metrics_cmd->add_option("--input", flags.input)->required();
    metrics_cmd->add_option("--selection", selection_path)->required();
    metrics_cmd->add_option("--plan", plan_path, "rate plan for smoothness");
    metrics_cmd->add_option("--out", out_path, "default: stdout");
    metrics_cmd->add_option("--metrics-window", flags.metrics_window);

    auto* run_cmd = app.add_subcommand("run", "full pipeline");
    run_cmd->add_option("--input", flags.input)->required();
    run_cmd->add_option("--selection-out", selection_out);
    run_cmd->add_option("--metrics-out", metrics_out);
    run_cmd->add_flag("--no-fill", flags.no_fill);
    run_cmd->add_option("--metrics-window", flags.metrics_window);
    run_cmd->add_option("--threads", flags.threads,
                        "worker cap (FFWD_THREADS overrides)");
    add_plan_flags(run_cmd, flags);
    add_sampler_flags(run_cmd, flags);

    auto* ablate_cmd =
        app.add_subcommand("ablate", "compare samplers on one container");
    ablate_cmd->add_option("--input", flags.input)->required();
    ablate_cmd->add_option("--samplers", ablate_methods)->delimiter(',');
    ablate_cmd->add_option("--out", out_path, "default: stdout");
    ablate_cmd->add_flag("--no-fill", flags.no_fill);
    ablate_cmd->add_option("--threads", flags.threads);
    add_plan_flags(ablate_cmd, flags);
    ablate_cmd->add_option("--lambda-scale", flags.lambda_scale);
    ablate_cmd->add_option("--spf", flags.spf);

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth_cmd->parsed()) return run_synth(config_path, out_path);
        if (segment_cmd->parsed()) return run_segment(flags, out_path);
        if (sample_cmd->parsed()) return run_sample(flags, plan_path, out_path);
        if (smooth_cmd->parsed())
            return run_smooth(flags, plan_path, selection_path, out_path);
        if (fill_cmd->parsed())
            return run_fillgap(flags, plan_path, selection_path, out_path);
        if (metrics_cmd->parsed())
            return run_metrics(flags, selection_path, plan_path, out_path);
        if (run_cmd->parsed()) return run_run(flags, selection_out, metrics_out);
        if (ablate_cmd->parsed()) return run_ablate(flags, ablate_methods, out_path);
    } catch (const infeasible_error& e) {
        std::cerr << e.what() << "\n";
        return 4;
    } catch (const io_error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const invariant_error& e) {
        std::cerr << e.what() << "\n";
        return 3;
    } catch (const error& e) {
        std::cerr << e.what() << "\n";
        return 3;
    }
    return 1;
}
