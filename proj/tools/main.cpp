// SPDX-License-Identifier: Apache-2.0
#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "adcalloc/campaign.hpp"
#include "adcalloc/quantizer.hpp"

int main(int argc, char** argv) {
    CLI::App app{"ADC bit-allocation Monte-Carlo campaign runner"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int workers = 0;
    std::vector<std::string> scenario_filter;

    CLI::App* run = app.add_subcommand("run", "Run a campaign from a config file");
    run->add_option("-c,--config", config_path, "campaign config file")->required();
    run->add_option("-o,--out", out_dir, "output directory (overrides config)");
    run->add_option("-s,--seed", seed, "master seed override")->each([&](const std::string&) {
        seed_set = true;
    });
    run->add_option("-w,--workers", workers, "worker thread count (0 = all cores)");
    run->add_option("--scenarios", scenario_filter,
                    "only run scenarios whose label contains one of these substrings");

    int cb_bits = 3;
    std::string cb_path = "codebook.csv";
    CLI::App* cb = app.add_subcommand("codebook", "Export a scalar quantizer codebook as CSV");
    cb->add_option("-b,--bits", cb_bits, "resolution in bits")->check(CLI::Range(1, 12));
    cb->add_option("-o,--out", cb_path, "output CSV path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            adcalloc::CampaignConfig cfg = adcalloc::CampaignConfig::from_file(config_path);
            if (seed_set) cfg.master_seed = seed;
            const std::string dir = out_dir.empty() ? cfg.output_dir : out_dir;
            const adcalloc::CampaignSummary s =
                adcalloc::run_campaign(cfg, dir, workers, scenario_filter);
            std::cout << "drops: " << s.drops_attempted - s.drops_failed << "/"
                      << s.drops_attempted << " succeeded\n";
            for (const std::string& f : s.files) std::cout << f << '\n';
        } else if (cb->parsed()) {
            adcalloc::export_codebook_csv(adcalloc::build_codebook(cb_bits), cb_path);
            std::cout << cb_path << '\n';
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
