// Config-driven orchestration: executes one experiment, persists JSONL / CSV
// outputs plus a manifest into a timestamped directory, and joins manifests
// into estimate-vs-theory comparison reports.

#ifndef EXITTAILS_RUNNER_HPP
#define EXITTAILS_RUNNER_HPP

#include <map>
#include <string>
#include <vector>

#include "exittails/config.hpp"

namespace exittails {

struct ResultManifest {
    std::string artifact_version;
    std::string experiment_name;
    std::string kind;
    std::string config_echo;
    std::uint64_t master_seed = 0;
    double wall_clock_seconds = 0.0;
    std::string out_dir;
    std::map<std::string, std::string> outputs; // role -> file path
};

// Executes config.kind; returns the manifest (also written to
// <out_dir>/manifest.json). Throws on invalid configs; on runtime failure a
// partial manifest is still written before the exception propagates.
ResultManifest run_experiment(const ExperimentConfig& config,
                              const std::string& out_root);

ResultManifest read_manifest(const std::string& path);

// Joins tail-style manifests into a comparison table sorted by eps descending.
// Returns CSV text; human-readable text goes to `text`.
std::string report(const std::vector<std::string>& manifest_paths,
                   std::string* text);

} // namespace exittails

#endif
