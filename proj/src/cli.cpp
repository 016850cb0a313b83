#include "susbam/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "susbam/catalog.hpp"
#include "susbam/config.hpp"
#include "susbam/csv.hpp"
#include "susbam/demodulator.hpp"
#include "susbam/error.hpp"
#include "susbam/modulator.hpp"
#include "susbam/spectral.hpp"
#include "susbam/stego.hpp"
#include "susbam/wav_io.hpp"

#ifndef SUSBAM_DATA_DIR
#define SUSBAM_DATA_DIR "data"
#endif

namespace susbam::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

int exit_code_for(const Error& e) {
    return e.code() == ErrorCode::IoFailure ? kExitIo : kExitValidation;
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json metrics_json(const spectral::BandMetrics& m) {
    return {{"inband_energy_db", m.inband_energy_db},
            {"leakage_below_carrier_db", optional_number(m.leakage_below_carrier_db)},
            {"sideband_suppression_db", optional_number(m.sideband_suppression_db)},
            {"occupancy_lo_hz", m.occupancy_lo_hz},
            {"occupancy_hi_hz", m.occupancy_hi_hz}};
}

/// Modulation flags shared by modulate, analyze, and batch. Flags given on
/// the command line win over a --config file, which wins over the defaults.
struct ModulationFlags {
    ModulationConfig values;
    std::string config_file;
    std::vector<std::pair<CLI::Option*, std::string>> options;

    void attach(CLI::App* app) {
        auto add = [&](const char* name, auto& field, const char* key, const char* help) {
            options.emplace_back(app->add_option(name, field, help)->capture_default_str(), key);
        };
        add("--carrier", values.carrier_hz, "carrier_hz",
            "Carrier frequency in Hz (published attack setting: 16 kHz)");
        add("--cutoff", values.cutoff_hz, "cutoff_hz",
            "Low-pass cutoff in Hz, also the sideband width (published attack setting: 6 kHz)");
        add("--alpha", values.tukey_alpha, "tukey_alpha",
            "Tukey window alpha (tool default, not published)");
        add("--taps", values.filter_taps, "filter_taps",
            "Odd FIR low-pass tap count (tool default)");
        add("--normalize", values.normalize_target, "normalize_target",
            "Output peak level in (0, 1] (published attack setting: full scale)");
        add("--rate", values.working_rate_hz, "working_rate_hz",
            "Working sample rate in Hz (tool default; inputs are resampled)");
        app->add_option("--config", config_file, "key = value file with any of the settings above");
    }

    ModulationConfig resolve() const {
        ModulationConfig config;
        if (!config_file.empty()) config = load_config_file(config_file);
        const ModulationConfig& flags = values;
        for (const auto& [opt, key] : options) {
            if (opt->count() == 0) continue;
            if (key == "carrier_hz") config.carrier_hz = flags.carrier_hz;
            if (key == "cutoff_hz") config.cutoff_hz = flags.cutoff_hz;
            if (key == "tukey_alpha") config.tukey_alpha = flags.tukey_alpha;
            if (key == "filter_taps") config.filter_taps = flags.filter_taps;
            if (key == "normalize_target") config.normalize_target = flags.normalize_target;
            if (key == "working_rate_hz") config.working_rate_hz = flags.working_rate_hz;
        }
        config.validate();
        return config;
    }
};

struct BatchEntry {
    fs::path input;
    fs::path output;
    std::string overrides;
};

struct BatchResult {
    std::optional<spectral::BandMetrics> metrics;
    std::string error;
};

std::vector<BatchEntry> read_manifest(const fs::path& manifest) {
    const auto rows = csv::read_file(manifest);
    if (rows.empty()) throw ParseError(1, 1, "manifest has no header row");
    const auto& header = rows.front().fields;
    auto column = [&](const std::string& name) -> std::optional<std::size_t> {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) return std::nullopt;
        return static_cast<std::size_t>(it - header.begin());
    };
    const auto in_col = column("input");
    const auto out_col = column("output");
    const auto ovr_col = column("overrides");
    if (!in_col || !out_col) {
        throw ParseError(rows.front().line, 1, "manifest header needs 'input' and 'output' columns");
    }

    const fs::path base = manifest.parent_path();
    std::vector<BatchEntry> entries;
    std::set<fs::path> inputs;
    std::set<fs::path> outputs;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& row = rows[i];
        auto field = [&](std::size_t c) { return c < row.fields.size() ? row.fields[c] : std::string(); };
        BatchEntry entry{base / field(*in_col), base / field(*out_col),
                         ovr_col ? field(*ovr_col) : std::string()};
        if (field(*in_col).empty() || field(*out_col).empty()) {
            throw ParseError(row.line, field(*in_col).empty() ? *in_col + 1 : *out_col + 1,
                             "empty path");
        }
        if (!inputs.insert(entry.input.lexically_normal()).second) {
            throw ParseError(row.line, *in_col + 1, "duplicate input " + field(*in_col));
        }
        if (!outputs.insert(entry.output.lexically_normal()).second) {
            throw ParseError(row.line, *out_col + 1, "duplicate output " + field(*out_col));
        }
        entries.push_back(std::move(entry));
    }
    return entries;
}

ModulationConfig apply_overrides(ModulationConfig config, const std::string& overrides) {
    std::istringstream items(overrides);
    std::string item;
    while (std::getline(items, item, ';')) {
        if (item.find_first_not_of(" \t") == std::string::npos) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorCode::ConfigInvalid, "override '" + item + "' is not key=value");
        }
        std::string key = item.substr(0, eq);
        key.erase(std::remove_if(key.begin(), key.end(), ::isspace), key.end());
        config.set(key, item.substr(eq + 1));
    }
    config.validate();
    return config;
}

std::string format_number(double v) {
    std::ostringstream s;
    s.precision(6);
    s << std::fixed << v;
    return s.str();
}

std::string format_optional(const std::optional<double>& v) { return v ? format_number(*v) : ""; }

}  // namespace

fs::path data_dir() {
    if (const char* env = std::getenv("SUSBAM_DATA_DIR"); env != nullptr && *env != '\0') return env;
    return SUSBAM_DATA_DIR;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Near-ultrasound SSB modulation, demodulation, detection and catalog toolkit",
                 "susbam"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    int exit_code = kExitOk;

    // modulate
    auto* mod_cmd = app.add_subcommand("modulate", "Shift a WAV's 0..cutoff band to carrier..carrier+cutoff");
    std::string mod_in, mod_out;
    std::size_t mod_channel = 0;
    ModulationFlags mod_flags;
    mod_cmd->add_option("input", mod_in, "Input PCM16 WAV")->required();
    mod_cmd->add_option("output", mod_out, "Output PCM16 WAV")->required();
    mod_cmd->add_option("--channel", mod_channel, "Input channel to modulate")->capture_default_str();
    mod_flags.attach(mod_cmd);
    mod_cmd->callback([&] {
        const auto config = mod_flags.resolve();
        const auto metrics = modulate_file(mod_in, mod_out, config, mod_channel);
        auto line = metrics_json(metrics);
        line["output"] = mod_out;
        line["sample_rate_hz"] = config.working_rate_hz;
        out << line.dump() << '\n';
    });

    // demodulate
    auto* demod_cmd = app.add_subcommand("demodulate", "Recover baseband audio from a near-ultrasound WAV");
    std::string demod_in, demod_out;
    std::size_t demod_channel = 0;
    DemodulationConfig demod_config;
    demod_cmd->add_option("input", demod_in, "Input PCM16 WAV")->required();
    demod_cmd->add_option("output", demod_out, "Output PCM16 WAV")->required();
    demod_cmd->add_option("--carrier", demod_config.carrier_hz, "Carrier in Hz (published attack setting: 16 kHz)")
        ->capture_default_str();
    demod_cmd->add_option("--cutoff", demod_config.recovery_cutoff_hz,
                          "Recovery low-pass cutoff in Hz (published attack setting: 6 kHz)")
        ->capture_default_str();
    demod_cmd->add_option("--taps", demod_config.filter_taps, "Odd FIR tap count (tool default)")
        ->capture_default_str();
    demod_cmd->add_flag("--phase-search", demod_config.phase_search,
                        "Search 16 carrier phases (for recordings with unknown phase)");
    demod_cmd->add_option("--channel", demod_channel, "Input channel")->capture_default_str();
    demod_cmd->callback([&] {
        const auto report = demodulate_file(demod_in, demod_out, demod_config, demod_channel);
        out << json{{"output", demod_out},
                    {"recovered_bandwidth_hz", report.recovered_bandwidth_hz},
                    {"sample_rate_hz", report.sample_rate_hz}}
                   .dump()
            << '\n';
    });

    // analyze
    auto* analyze_cmd = app.add_subcommand("analyze", "Print band metrics of a WAV as JSON");
    std::string analyze_in;
    std::size_t analyze_channel = 0;
    ModulationFlags analyze_flags;
    analyze_cmd->add_option("input", analyze_in, "PCM16 WAV")->required();
    analyze_cmd->add_option("--channel", analyze_channel, "Channel to analyze")->capture_default_str();
    analyze_flags.attach(analyze_cmd);
    analyze_cmd->callback([&] {
        const auto signal = to_float(read_wav(analyze_in), analyze_channel);
        auto line = metrics_json(spectral::measure(signal, analyze_flags.resolve()));
        line["input"] = analyze_in;
        line["sample_rate_hz"] = signal.sample_rate_hz();
        line["samples"] = signal.size();
        out << line.dump() << '\n';
    });

    // spectrogram
    auto* spec_cmd = app.add_subcommand("spectrogram", "Render an STFT spectrogram as a PGM image");
    std::string spec_in, spec_out;
    std::size_t spec_frame = 1024, spec_hop = 256, spec_channel = 0;
    double spec_alpha = 1.0;
    spec_cmd->add_option("input", spec_in, "PCM16 WAV")->required();
    spec_cmd->add_option("output", spec_out, "Output .pgm path")->required();
    spec_cmd->add_option("--frame", spec_frame, "Frame length in samples")->capture_default_str();
    spec_cmd->add_option("--hop", spec_hop, "Hop in samples")->capture_default_str();
    spec_cmd->add_option("--alpha", spec_alpha, "Tukey analysis window alpha (1 = Hann)")
        ->capture_default_str();
    spec_cmd->add_option("--channel", spec_channel, "Channel")->capture_default_str();
    spec_cmd->callback([&] {
        const auto signal = to_float(read_wav(spec_in), spec_channel);
        const auto spec =
            spectral::stft(signal, spec_frame, spec_hop, {dsp::WindowKind::tukey, spec_alpha, 0});
        spectral::render_spectrogram(spec, spec_out);
        out << json{{"output", spec_out}, {"frames", spec.frames()}, {"bins", spec.bins()}}.dump()
            << '\n';
    });

    // detect
    auto* detect_cmd = app.add_subcommand(
        "detect", "Flag near-ultrasound command energy; exits 2 when flagged, 0 when clean");
    std::string detect_in;
    std::size_t detect_channel = 0;
    spectral::DetectorConfig detector;
    detect_cmd->add_option("input", detect_in, "PCM16 WAV")->required();
    detect_cmd->add_option("--carrier", detector.carrier_hz, "Attack band start in Hz (published attack setting: 16 kHz)")
        ->capture_default_str();
    detect_cmd->add_option("--band", detector.band_hz, "Attack band width in Hz (published attack setting: 6 kHz)")
        ->capture_default_str();
    detect_cmd->add_option("--ratio", detector.ratio_threshold,
                           "Attack/speech band energy ratio that flags a frame (tool default, +6 dB)")
        ->capture_default_str();
    detect_cmd->add_option("--sustain-ms", detector.sustain_ms,
                           "Flagged frames must persist this long (tool default)")
        ->capture_default_str();
    detect_cmd->add_option("--frame-ms", detector.frame_ms, "Frame length in ms (tool default)")
        ->capture_default_str();
    detect_cmd->add_option("--hop-ms", detector.hop_ms, "Frame hop in ms (tool default)")
        ->capture_default_str();
    detect_cmd->add_option("--channel", detect_channel, "Channel")->capture_default_str();
    detect_cmd->callback([&] {
        const auto verdict = spectral::detect(to_float(read_wav(detect_in), detect_channel), detector);
        const auto flagged_frames = std::count(verdict.frame_flags.begin(), verdict.frame_flags.end(), true);
        out << json{{"input", detect_in},
                    {"flagged", verdict.flagged},
                    {"score", verdict.score},
                    {"sustained_ms", verdict.sustained_ms},
                    {"frames", verdict.frame_flags.size()},
                    {"flagged_frames", flagged_frames}}
                   .dump()
            << '\n';
        exit_code = verdict.flagged ? kExitFlagged : kExitOk;
    });

    // embed
    auto* embed_cmd = app.add_subcommand("embed", "Mix a near-ultrasound payload into a host's longest silence");
    std::string host_path, payload_path, embed_out, embed_report;
    std::size_t host_channel = 0;
    double gain = 0.5;
    stego::SilenceOptions silence;
    embed_cmd->add_option("host", host_path, "Host PCM16 WAV")->required();
    embed_cmd->add_option("payload", payload_path, "Payload PCM16 WAV (e.g. modulate output)")->required();
    embed_cmd->add_option("output", embed_out, "Output PCM16 WAV")->required();
    embed_cmd->add_option("--gain", gain, "Payload gain in (0, 1] (tool default)")->capture_default_str();
    embed_cmd->add_option("--rms-threshold", silence.rms_threshold, "Silence RMS threshold (tool default)")
        ->capture_default_str();
    embed_cmd->add_option("--frame-ms", silence.frame_ms, "Silence analysis frame (tool default)")
        ->capture_default_str();
    embed_cmd->add_option("--min-region-ms", silence.min_region_ms, "Shortest usable silence (tool default)")
        ->capture_default_str();
    embed_cmd->add_option("--channel", host_channel, "Host channel")->capture_default_str();
    embed_cmd->add_option("--report", embed_report, "Also write the silence-map JSON to this file");
    embed_cmd->callback([&] {
        const auto host = to_float(read_wav(host_path), host_channel);
        const auto payload = to_float(read_wav(payload_path));
        const auto map = stego::find_silence(host, silence);
        const auto result = stego::embed(host, payload, map, gain);
        write_wav(to_pcm(result.output), embed_out);

        json regions = json::array();
        for (const auto& r : map.regions) regions.push_back({r.start_sample, r.end_sample});
        const json report{{"output", embed_out},
                          {"sample_rate_hz", host.sample_rate_hz()},
                          {"rms_threshold", map.rms_threshold},
                          {"min_region_ms", map.min_region_ms},
                          {"regions", regions},
                          {"insert_start", result.insert_start},
                          {"insert_end", result.insert_end},
                          {"gain", gain}};
        if (!embed_report.empty()) {
            std::ofstream file(embed_report, std::ios::trunc);
            file << report.dump(2) << '\n';
            if (!file) throw Error(ErrorCode::IoFailure, "cannot write " + embed_report);
        }
        out << report.dump() << '\n';
    });

    // catalog
    auto* catalog_cmd = app.add_subcommand("catalog", "Query the ATT&CK / D3FEND pairing catalog");
    catalog_cmd->require_subcommand(1);
    std::string catalog_file = (data_dir() / "mitre_catalog.csv").string();
    catalog_cmd->add_option("--file", catalog_file, "Catalog CSV")->capture_default_str();
    auto entry_json = [](const catalog::CatalogEntry& e) {
        return json{{"attack_tactic", e.attack_tactic},
                    {"attack_technique_id", e.attack_technique_id},
                    {"attack_technique_name", e.attack_technique_name},
                    {"defend_tactic", e.defend_tactic},
                    {"defend_technique_id", e.defend_technique_id},
                    {"defend_technique_name", e.defend_technique_name},
                    {"ultrasonic_applicable", e.ultrasonic_applicable}};
    };
    auto* list_cmd = catalog_cmd->add_subcommand("list", "Print every pairing");
    list_cmd->callback([&] {
        for (const auto& e : catalog::load_catalog(catalog_file)) out << entry_json(e).dump() << '\n';
    });
    auto* pair_cmd = catalog_cmd->add_subcommand("pair", "Print the defenses paired with an ATT&CK technique");
    std::string technique;
    pair_cmd->add_option("technique", technique, "ATT&CK technique id, e.g. T1189")->required();
    pair_cmd->callback([&] {
        const auto entries = catalog::load_catalog(catalog_file);
        for (const auto& e : catalog::pair_defense(entries, technique)) out << entry_json(e).dump() << '\n';
    });

    // survey
    auto* survey_cmd = app.add_subcommand("survey", "Aggregate a command survey CSV per arm");
    std::string survey_file = (data_dir() / "command_survey.csv").string();
    survey_cmd->add_option("file", survey_file, "Survey CSV")->capture_default_str();
    survey_cmd->callback([&] {
        const auto totals = catalog::aggregate_survey(catalog::load_survey(survey_file));
        auto arm_json = [&](const char* arm, const catalog::ArmTotals& t) {
            return json{{"arm", arm},
                        {"records", totals.records},
                        {"fail", t.fail_n},
                        {"trigger", t.trigger_n},
                        {"success", t.success_n},
                        {"fail_pct", t.fail_pct()},
                        {"trigger_pct", t.trigger_pct()},
                        {"success_pct", t.success_pct()},
                        {"fail_fraction", t.fail_fraction},
                        {"trigger_fraction", t.trigger_fraction},
                        {"success_fraction", t.success_fraction}};
        };
        out << arm_json("original", totals.original).dump() << '\n';
        out << arm_json("nuit", totals.nuit).dump() << '\n';
        err << "original " << totals.original.fail_n << '/' << totals.original.trigger_n << '/'
            << totals.original.success_n << "  nuit " << totals.nuit.fail_n << '/'
            << totals.nuit.trigger_n << '/' << totals.nuit.success_n << " (" << totals.nuit.fail_pct()
            << "%/" << totals.nuit.trigger_pct() << "%/" << totals.nuit.success_pct()
            << "% fail/trigger/success)\n";
    });

    // batch
    auto* batch_cmd = app.add_subcommand("batch", "Modulate every file of a manifest and write a metrics report");
    std::string manifest_path, report_path;
    unsigned jobs = 1;
    ModulationFlags batch_flags;
    batch_cmd->add_option("manifest", manifest_path, "CSV with input,output[,overrides] columns")->required();
    batch_cmd->add_option("--report", report_path, "Report CSV path")->required();
    batch_cmd->add_option("--jobs", jobs, "Parallel workers")->capture_default_str()->check(CLI::Range(1u, 256u));
    batch_flags.attach(batch_cmd);
    batch_cmd->callback([&] {
        const auto base = batch_flags.resolve();
        const auto entries = read_manifest(manifest_path);
        std::vector<BatchResult> results(entries.size());

        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t i = next++; i < entries.size(); i = next++) {
                try {
                    const auto config = apply_overrides(base, entries[i].overrides);
                    results[i].metrics = modulate_file(entries[i].input, entries[i].output, config);
                } catch (const std::exception& e) {
                    results[i].error = e.what();
                }
            }
        };
        {
            std::vector<std::jthread> pool;
            const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(entries.size())));
            for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
        }

        std::ofstream report(report_path, std::ios::trunc);
        if (!report) throw Error(ErrorCode::IoFailure, "cannot open " + report_path + " for writing");
        report << "input,output,leakage_db,suppression_db,occupancy_lo,occupancy_hi,error\n";
        std::size_t failed = 0;
        for (std::size_t i = 0; i < entries.size(); ++i) {
            const auto& r = results[i];
            std::vector<std::string> row{entries[i].input.string(), entries[i].output.string()};
            if (r.metrics) {
                row.insert(row.end(), {format_optional(r.metrics->leakage_below_carrier_db),
                                       format_optional(r.metrics->sideband_suppression_db),
                                       format_number(r.metrics->occupancy_lo_hz),
                                       format_number(r.metrics->occupancy_hi_hz), ""});
            } else {
                ++failed;
                row.insert(row.end(), {"", "", "", "", "ERROR: " + r.error});
                err << "batch: " << entries[i].input.string() << ": " << r.error << '\n';
            }
            report << csv::join(row) << '\n';
        }
        report.flush();
        if (!report) throw Error(ErrorCode::IoFailure, "write failed on " + report_path);
        out << json{{"report", report_path}, {"entries", entries.size()}, {"failed", failed}}.dump() << '\n';
        if (failed > 0) exit_code = kExitValidation;
    });

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, err, err);
        return kExitUsage;
    } catch (const Error& e) {
        err << "susbam: " << e.what() << '\n';
        return exit_code_for(e);
    } catch (const std::exception& e) {
        err << "susbam: internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    return exit_code;
}

}  // namespace susbam::cli
