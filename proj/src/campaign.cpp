// SPDX-License-Identifier: Apache-2.0
#include "adcalloc/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "adcalloc/allocation.hpp"
#include "adcalloc/impairments.hpp"
#include "adcalloc/optimize.hpp"
#include "adcalloc/quantizer.hpp"

namespace adcalloc {

namespace {

constexpr const char* kVersion = "adcalloc 1.0.0";

std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t chain_seed(std::uint64_t s, std::initializer_list<std::uint64_t> path) {
    s = mix64(s);
    for (std::uint64_t p : path) s = mix64(s ^ mix64(p + 0x9e3779b97f4a7c15ULL));
    return s;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, sep)) out.push_back(trim(item));
    return out;
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

} // namespace

const char* to_string(AllocationMethod m) {
    switch (m) {
        case AllocationMethod::Equal: return "Equal";
        case AllocationMethod::MinPilotDist: return "MinPilotDist";
        case AllocationMethod::MaxProdSinr: return "MaxProdSinr";
        case AllocationMethod::MaxMinFair: return "MaxMinFair";
        case AllocationMethod::PowerConstrainedMaxProd: return "PowerConstrainedMaxProd";
    }
    return "?";
}

AllocationMethod allocation_method_from_string(const std::string& s) {
    if (s == "Equal") return AllocationMethod::Equal;
    if (s == "MinPilotDist") return AllocationMethod::MinPilotDist;
    if (s == "MaxProdSinr") return AllocationMethod::MaxProdSinr;
    if (s == "MaxMinFair") return AllocationMethod::MaxMinFair;
    if (s == "PowerConstrainedMaxProd") return AllocationMethod::PowerConstrainedMaxProd;
    throw std::invalid_argument("unknown allocation method: " + s);
}

const char* to_string(QuantizationMode m) {
    return m == QuantizationMode::Additive ? "additive" : "exact";
}

QuantizationMode quantization_mode_from_string(const std::string& s) {
    if (s == "additive") return QuantizationMode::Additive;
    if (s == "exact") return QuantizationMode::Exact;
    throw std::invalid_argument("unknown quantization mode: " + s);
}

std::string Scenario::label() const {
    std::string out = to_string(chan_case);
    out += '-';
    out += to_string(method);
    out += '-';
    out += to_string(combiner);
    out += '-';
    out += to_string(mode);
    return out;
}

Scenario parse_scenario(const std::string& spec) {
    const auto parts = split(spec, ':');
    if (parts.size() != 4)
        throw std::invalid_argument("scenario must be case:method:combiner:mode, got: " + spec);
    Scenario sc;
    sc.chan_case = channel_case_from_string(parts[0]);
    sc.method = allocation_method_from_string(parts[1]);
    sc.combiner = combiner_from_string(parts[2]);
    sc.mode = quantization_mode_from_string(parts[3]);
    return sc;
}

CampaignConfig CampaignConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return from_text(buf.str());
}

CampaignConfig CampaignConfig::from_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        " lacks '=': " + line);
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (kv.count(key))
            throw std::invalid_argument("duplicate config key: " + key);
        kv[key] = val;
    }

    CampaignConfig cfg;
    auto take = [&kv](const std::string& key) -> std::string {
        auto it = kv.find(key);
        if (it == kv.end()) return {};
        std::string v = it->second;
        kv.erase(it);
        return v;
    };
    auto get_d = [&take](const std::string& key, double& dst) {
        const std::string v = take(key);
        if (!v.empty()) dst = std::stod(v);
    };
    auto get_i = [&take](const std::string& key, int& dst) {
        const std::string v = take(key);
        if (!v.empty()) dst = std::stoi(v);
    };

    get_i("network.M", cfg.network.M);
    get_i("network.K", cfg.network.K);
    get_d("network.side_length_km", cfg.network.side_length_km);
    get_d("network.min_dist_km", cfg.network.min_dist_km);
    get_d("network.alpha", cfg.network.alpha);
    get_d("network.omega_db", cfg.network.omega_db);
    get_d("network.sigma_sh_db", cfg.network.sigma_sh_db);
    get_d("network.sigma_ang_deg", cfg.network.sigma_ang_deg);
    get_d("network.sigma_lsf_db", cfg.network.sigma_lsf_db);
    get_d("network.qbar_over_sigma2", cfg.network.qbar_over_sigma2);
    get_d("network.rho_max", cfg.network.rho_max);
    get_d("network.sigma2", cfg.network.sigma2);
    get_i("network.tau_c", cfg.network.tau_c);
    get_i("network.tau_p", cfg.network.tau_p);

    get_i("campaign.n_drops", cfg.n_drops);
    get_i("campaign.n_trials", cfg.n_trials);
    if (const std::string v = take("campaign.master_seed"); !v.empty())
        cfg.master_seed = std::stoull(v);
    if (const std::string v = take("campaign.output_dir"); !v.empty()) cfg.output_dir = v;
    get_i("campaign.workers", cfg.workers);

    get_d("adc.zeta", cfg.zeta);
    get_i("adc.b_tot", cfg.b_tot);

    get_d("power.P_cst", cfg.power.P_cst);
    get_d("power.P_ue", cfg.power.P_ue);
    get_d("power.P_bsa", cfg.power.P_bsa);
    if (const std::string v = take("power.P_cd_per_gbit"); !v.empty())
        cfg.power.P_cd = std::stod(v) * 1e-9;
    get_d("power.eta", cfg.power.eta);
    get_d("power.D1", cfg.power.D1);
    get_d("power.bandwidth", cfg.power.bandwidth);
    get_d("power.gamma_pc", cfg.gamma_pc);
    if (const std::string v = take("sweep.gamma_pc"); !v.empty()) {
        for (const std::string& s : split(v, ',')) cfg.gamma_pc_sweep.push_back(std::stod(s));
    }

    // scenario.0, scenario.1, ... in numeric order
    std::vector<std::pair<int, std::string>> scen;
    for (auto it = kv.begin(); it != kv.end();) {
        if (it->first.rfind("scenario.", 0) == 0) {
            scen.emplace_back(std::stoi(it->first.substr(9)), it->second);
            it = kv.erase(it);
        } else {
            ++it;
        }
    }
    std::sort(scen.begin(), scen.end());
    for (const auto& [idx, spec] : scen) cfg.scenarios.push_back(parse_scenario(spec));

    if (!kv.empty()) throw std::invalid_argument("unknown config key: " + kv.begin()->first);
    cfg.power.tau_p = cfg.network.tau_p;
    cfg.power.tau_c = cfg.network.tau_c;
    cfg.validate();
    return cfg;
}

std::string CampaignConfig::canonical_text() const {
    std::map<std::string, std::string> kv;
    kv["network.M"] = std::to_string(network.M);
    kv["network.K"] = std::to_string(network.K);
    kv["network.side_length_km"] = num(network.side_length_km);
    kv["network.min_dist_km"] = num(network.min_dist_km);
    kv["network.alpha"] = num(network.alpha);
    kv["network.omega_db"] = num(network.omega_db);
    kv["network.sigma_sh_db"] = num(network.sigma_sh_db);
    kv["network.sigma_ang_deg"] = num(network.sigma_ang_deg);
    kv["network.sigma_lsf_db"] = num(network.sigma_lsf_db);
    kv["network.qbar_over_sigma2"] = num(network.qbar_over_sigma2);
    kv["network.rho_max"] = num(network.rho_max);
    kv["network.sigma2"] = num(network.sigma2);
    kv["network.tau_c"] = std::to_string(network.tau_c);
    kv["network.tau_p"] = std::to_string(network.tau_p);
    kv["campaign.n_drops"] = std::to_string(n_drops);
    kv["campaign.n_trials"] = std::to_string(n_trials);
    kv["campaign.master_seed"] = std::to_string(master_seed);
    kv["adc.zeta"] = num(zeta);
    kv["adc.b_tot"] = std::to_string(b_tot);
    kv["power.P_cst"] = num(power.P_cst);
    kv["power.P_ue"] = num(power.P_ue);
    kv["power.P_bsa"] = num(power.P_bsa);
    kv["power.P_cd_per_gbit"] = num(power.P_cd * 1e9);
    kv["power.eta"] = num(power.eta);
    kv["power.D1"] = num(power.D1);
    kv["power.bandwidth"] = num(power.bandwidth);
    kv["power.gamma_pc"] = num(gamma_pc);
    {
        std::string sw;
        for (double g : gamma_pc_sweep) {
            if (!sw.empty()) sw += ',';
            sw += num(g);
        }
        kv["sweep.gamma_pc"] = sw;
    }
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
        std::string spec = std::string(to_string(scenarios[i].chan_case)) + ":" +
                           to_string(scenarios[i].method) + ":" +
                           to_string(scenarios[i].combiner) + ":" + to_string(scenarios[i].mode);
        kv["scenario." + std::to_string(i)] = spec;
    }
    std::string out;
    for (const auto& [k, v] : kv) {
        out += k;
        out += " = ";
        out += v;
        out += '\n';
    }
    return out;
}

std::uint64_t CampaignConfig::config_hash() const {
    // FNV-1a 64
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical_text()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

void CampaignConfig::validate() const {
    network.validate();
    if (n_drops <= 0) throw std::invalid_argument("n_drops must be positive");
    if (n_trials < 1000) throw std::invalid_argument("n_trials must be at least 1000");
    if (!(zeta > 1.0 && zeta < 2.0)) throw std::invalid_argument("zeta must lie in (1,2)");
    if (b_tot != 0 && b_tot <= network.M)
        throw std::invalid_argument("b_tot must exceed M (or be 0 for the 3M default)");
    if (gamma_pc <= 0.0) throw std::invalid_argument("gamma_pc must be positive");
    for (double g : gamma_pc_sweep)
        if (g <= 0.0) throw std::invalid_argument("gamma_pc sweep values must be positive");
    if (workers < 0) throw std::invalid_argument("workers must be nonnegative");
    PowerModel pm = power;
    pm.tau_p = network.tau_p;
    pm.tau_c = network.tau_c;
    pm.validate();
    if (scenarios.empty()) throw std::invalid_argument("at least one scenario is required");
}

CdfTable aggregate_cdf(std::vector<double> samples) {
    if (samples.empty()) throw std::invalid_argument("aggregate_cdf: empty sample set");
    std::sort(samples.begin(), samples.end());
    const int n = static_cast<int>(samples.size());
    CdfTable t;
    t.values = Eigen::Map<Eigen::VectorXd>(samples.data(), n);
    t.cdf = Eigen::VectorXd::LinSpaced(n, 1.0, static_cast<double>(n)) / n;
    return t;
}

namespace {

struct Evaluated {
    Eigen::VectorXd se;
    Eigen::VectorXd sinr;
    Eigen::VectorXd bits;  ///< as-evaluated resolutions (integer in exact mode)
    bool flagged = false;
};

Evaluated evaluate_se(const CampaignConfig& cfg, const Scenario& sc, const NetworkRealization& net,
                      const Eigen::VectorXd& eps, const Eigen::VectorXd& zeta,
                      const Eigen::VectorXd& p, std::uint64_t drop_seed) {
    const NetworkConfig& ncfg = cfg.network;
    const int tau_p = ncfg.pilot_len();
    Evaluated ev;
    if (sc.mode == QuantizationMode::Exact) {
        const Eigen::VectorXd b_real = bits_from_eps(eps, zeta);
        // the rounding repair needs an integer budget; power-constrained
        // allocations carry none, so the rounded sum of the solution is used
        int budget = sc.method == AllocationMethod::PowerConstrainedMaxProd
                         ? std::max<int>(ncfg.M, static_cast<int>(std::llround(b_real.sum())))
                         : cfg.bit_budget();
        const Eigen::VectorXi b_int = round_to_integer_bits(b_real, budget);
        const ExactSeResult ex =
            se_exact_quantization(net, b_int, sc.combiner, p, ncfg.sigma2, tau_p, ncfg.tau_c,
                                  cfg.n_trials, chain_seed(drop_seed, {12}));
        ev.se = ex.se;
        ev.sinr = ex.sinr;
        ev.bits = b_int.cast<double>();
        ev.flagged = ex.stderr_flagged;
    } else {
        const ImpairmentProfile profile = profile_from_eps(eps, zeta);
        SinrReport rep;
        if (sc.combiner == CombinerKind::MR) {
            const EstimatorState state =
                build_estimator(net.correlation, profile, net.pilot_energy, ncfg.sigma2, tau_p);
            rep = sinr_mr_closed_form(net.correlation, state, profile, p, net.pilot_energy,
                                      ncfg.sigma2, tau_p, ncfg.tau_c);
        } else {
            rep = sinr_uatf_monte_carlo(sc.combiner, net.correlation, profile, p, net.pilot_energy,
                                        ncfg.sigma2, tau_p, ncfg.tau_c, cfg.n_trials,
                                        chain_seed(drop_seed, {11}));
        }
        ev.se = rep.se;
        ev.sinr = rep.sinr;
        ev.bits = bits_from_eps(eps, zeta);
        ev.flagged = rep.stderr_flagged;
    }
    return ev;
}

} // namespace

DropResult run_drop(const CampaignConfig& cfg, const Scenario& sc, int drop_index) {
    NetworkConfig ncfg = cfg.network;
    ncfg.chan_case = sc.chan_case;
    const std::uint64_t dseed =
        chain_seed(cfg.master_seed, {static_cast<std::uint64_t>(sc.chan_case),
                                     static_cast<std::uint64_t>(drop_index)});
    DropResult res;
    res.drop_seed = dseed;

    const NetworkRealization net = drop_network(ncfg, dseed);
    const int M = ncfg.M;
    const int K = ncfg.K;
    const int tau_p = ncfg.pilot_len();
    const Eigen::VectorXd zeta = Eigen::VectorXd::Constant(M, cfg.zeta);
    const int b_tot = cfg.bit_budget();

    Eigen::VectorXd eps;
    // non-optimizing methods pair with statistical channel-inversion power
    // control: data energy equals the pilot energy q_k = min(rho_max, qbar/beta)
    Eigen::VectorXd p = net.pilot_energy;

    switch (sc.method) {
        case AllocationMethod::Equal:
            eps = equal_bits_profile(zeta, b_tot).eps;
            break;
        case AllocationMethod::MinPilotDist: {
            const Eigen::VectorXd p_u =
                undistorted_pilot_power(net.correlation.diagR, net.pilot_energy);
            eps = allocate_min_pilot_distortion(p_u, zeta, b_tot).eps;
            break;
        }
        case AllocationMethod::MaxProdSinr:
        case AllocationMethod::MaxMinFair: {
            PsiIterationConfig pc;
            pc.objective = sc.method == AllocationMethod::MaxProdSinr ? SinrObjective::MaxProd
                                                                      : SinrObjective::MaxMin;
            pc.b_tot = b_tot;
            const PsiIterationResult r = iterate_psi(net.correlation, zeta, net.pilot_energy,
                                                     ncfg.sigma2, tau_p, ncfg.rho_max, pc);
            eps = r.eps;
            p = r.data_energy;
            break;
        }
        case AllocationMethod::PowerConstrainedMaxProd: {
            std::vector<double> gammas = cfg.gamma_pc_sweep;
            if (gammas.empty()) gammas.push_back(cfg.gamma_pc);
            PowerModel pm = cfg.power;
            pm.tau_p = ncfg.tau_p;
            pm.tau_c = ncfg.tau_c;
            for (std::size_t gi = 0; gi < gammas.size(); ++gi) {
                PowerConstraintSpec ps;
                ps.gamma_pc = gammas[gi];
                ps.D1 = pm.D1;
                ps.eta = pm.eta;
                ps.bandwidth = pm.bandwidth;
                ps.tau_p = ncfg.tau_p;
                ps.tau_c = ncfg.tau_c;
                PsiIterationConfig pc;
                pc.objective = SinrObjective::MaxProd;
                pc.power = &ps;
                pc.mixed = true;
                const PsiIterationResult r = iterate_psi(net.correlation, zeta, net.pilot_energy,
                                                         ncfg.sigma2, tau_p, ncfg.rho_max, pc);
                const Evaluated ev = evaluate_se(cfg, sc, net, r.eps, zeta, r.data_energy, dseed);
                const double se_sum = ev.se.sum();
                const double ptx = total_tx_adc_power(r.data_energy, r.eps, zeta, pm, K);
                const double ee = energy_efficiency(se_sum, r.data_energy, net.pilot_energy,
                                                    r.eps, zeta, pm, M, K);
                res.ee_rows.push_back({gammas[gi], se_sum, ptx, ee});
                if (gi == 0) {
                    res.se = ev.se;
                    res.sinr = ev.sinr;
                    res.bits = ev.bits;
                    res.data_energy = r.data_energy;
                    res.stderr_flagged = ev.flagged;
                }
            }
            return res;
        }
    }

    const Evaluated ev = evaluate_se(cfg, sc, net, eps, zeta, p, dseed);
    res.se = ev.se;
    res.sinr = ev.sinr;
    res.bits = ev.bits;
    res.data_energy = p;
    res.stderr_flagged = ev.flagged;
    return res;
}

namespace {

void write_cdf_csv(const std::string& path, const CdfTable& t, const char* value_name) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << value_name << ",cdf\n";
    for (int i = 0; i < t.values.size(); ++i)
        out << num(t.values(i)) << ',' << num(t.cdf(i)) << '\n';
}

} // namespace

CampaignSummary run_campaign(const CampaignConfig& cfg, const std::string& out_dir, int workers,
                             const std::vector<std::string>& scenario_filter) {
    cfg.validate();
    std::filesystem::create_directories(out_dir);

    std::vector<Scenario> scenarios;
    for (const Scenario& sc : cfg.scenarios) {
        if (scenario_filter.empty()) {
            scenarios.push_back(sc);
            continue;
        }
        const std::string label = sc.label();
        for (const std::string& f : scenario_filter) {
            if (label.find(f) != std::string::npos) {
                scenarios.push_back(sc);
                break;
            }
        }
    }
    if (scenarios.empty()) throw std::invalid_argument("scenario filter matched nothing");

    int nw = workers > 0 ? workers : cfg.workers;
    if (nw <= 0) nw = static_cast<int>(std::thread::hardware_concurrency());
    nw = std::max(1, std::min(nw, cfg.n_drops));

    CampaignSummary summary;
    std::vector<std::string> failure_log;

    for (const Scenario& sc : scenarios) {
        std::vector<DropResult> results(cfg.n_drops);
        std::atomic<int> next{0};
        auto worker = [&]() {
            for (int i = next.fetch_add(1); i < cfg.n_drops; i = next.fetch_add(1)) {
                try {
                    results[i] = run_drop(cfg, sc, i);
                } catch (const std::exception& e) {
                    results[i].failed = true;
                    results[i].error = e.what();
                    results[i].drop_seed = chain_seed(
                        cfg.master_seed, {static_cast<std::uint64_t>(sc.chan_case),
                                          static_cast<std::uint64_t>(i)});
                }
            }
        };
        std::vector<std::thread> pool;
        for (int t = 0; t < nw; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();

        const std::string label = sc.label();
        std::vector<double> se_samples, bit_samples;
        const std::string se_path = out_dir + "/" + label + "_se.csv";
        const std::string bit_path = out_dir + "/" + label + "_bits.csv";
        std::ofstream se_out(se_path), bit_out(bit_path);
        if (!se_out || !bit_out) throw std::runtime_error("cannot write outputs in " + out_dir);
        se_out << "drop,ue,sinr,se,stderr_flagged\n";
        bit_out << "drop,antenna,bits\n";
        std::ofstream ee_out;
        std::string ee_path;
        if (sc.method == AllocationMethod::PowerConstrainedMaxProd) {
            ee_path = out_dir + "/" + label + "_ee.csv";
            ee_out.open(ee_path);
            ee_out << "gamma_pc,drop,se_sum,p_txd_adc,ee\n";
        }

        int failed = 0;
        for (int d = 0; d < cfg.n_drops; ++d) {
            const DropResult& r = results[d];
            summary.drops_attempted++;
            if (r.failed) {
                failed++;
                summary.drops_failed++;
                failure_log.push_back(label + " drop " + std::to_string(d) + " seed " +
                                      std::to_string(r.drop_seed) + ": " + r.error);
                continue;
            }
            for (int k = 0; k < r.se.size(); ++k) {
                se_out << d << ',' << k << ',' << num(r.sinr(k)) << ',' << num(r.se(k)) << ','
                       << (r.stderr_flagged ? 1 : 0) << '\n';
                se_samples.push_back(r.se(k));
            }
            for (int m = 0; m < r.bits.size(); ++m) {
                bit_out << d << ',' << m << ',' << num(r.bits(m)) << '\n';
                bit_samples.push_back(r.bits(m));
            }
            for (const auto& row : r.ee_rows)
                ee_out << num(row[0]) << ',' << d << ',' << num(row[1]) << ',' << num(row[2])
                       << ',' << num(row[3]) << '\n';
        }
        se_out.close();
        bit_out.close();
        // recorded relative to out_dir so listings are location independent
        summary.files.push_back(label + "_se.csv");
        summary.files.push_back(label + "_bits.csv");
        if (!ee_path.empty()) {
            ee_out.close();
            summary.files.push_back(label + "_ee.csv");
        }

        if (!se_samples.empty()) {
            write_cdf_csv(out_dir + "/" + label + "_se_cdf.csv", aggregate_cdf(se_samples), "se");
            write_cdf_csv(out_dir + "/" + label + "_bits_cdf.csv", aggregate_cdf(bit_samples),
                          "bits");
            summary.files.push_back(label + "_se_cdf.csv");
            summary.files.push_back(label + "_bits_cdf.csv");
        }
    }

    {
        std::ofstream schema(out_dir + "/schema.txt");
        schema << "*_se.csv: drop index, UE index, effective SINR (linear), SE (bit/s/Hz),\n"
                  "  stderr_flagged (1 when any Monte-Carlo moment had >5% relative stderr)\n"
                  "*_bits.csv: drop index, antenna index, ADC resolution (bits; integer in\n"
                  "  exact-quantization mode, real-valued otherwise)\n"
                  "*_ee.csv: power cap gamma_pc (W), drop index, sum SE (bit/s/Hz),\n"
                  "  transmit+ADC power (W), energy efficiency (bit/J)\n"
                  "*_cdf.csv: sorted sample value, empirical CDF F(x_(i)) = i/n\n";
    }
    {
        std::ofstream man(out_dir + "/manifest.txt");
        char hash_hex[20];
        std::snprintf(hash_hex, sizeof(hash_hex), "%016llx",
                      static_cast<unsigned long long>(cfg.config_hash()));
        man << "version: " << kVersion << '\n';
        man << "config_hash: " << hash_hex << '\n';
        man << "master_seed: " << cfg.master_seed << '\n';
        man << "n_drops: " << cfg.n_drops << '\n';
        man << "n_trials: " << cfg.n_trials << '\n';
        man << "scenarios:\n";
        for (const Scenario& sc : scenarios) man << "  " << sc.label() << '\n';
        man << "files:\n";
        for (const std::string& f : summary.files) man << "  " << f << '\n';
        man << "drops_attempted: " << summary.drops_attempted << '\n';
        man << "drops_failed: " << summary.drops_failed << '\n';
        if (!failure_log.empty()) {
            man << "failures:\n";
            for (const std::string& f : failure_log) man << "  " << f << '\n';
        }
        man << "config:\n";
        std::istringstream ct(cfg.canonical_text());
        std::string line;
        while (std::getline(ct, line)) man << "  " << line << '\n';
    }
    summary.files.push_back("schema.txt");
    summary.files.push_back("manifest.txt");

    if (summary.drops_failed * 20 > summary.drops_attempted)
        throw std::runtime_error("campaign aborted: more than 5% of drops failed (" +
                                 std::to_string(summary.drops_failed) + "/" +
                                 std::to_string(summary.drops_attempted) + ")");
    return summary;
}

} // namespace adcalloc
