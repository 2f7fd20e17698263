#pragma once

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "tcofdm/channel.hpp"
#include "tcofdm/fec.hpp"
#include "tcofdm/modem.hpp"
#include "tcofdm/ofdm.hpp"
#include "tcofdm/rng.hpp"
#include "tcofdm/turbo.hpp"

namespace tcofdm {

enum class ScenarioKind {
    awgn,
    awgn_pn,
    awgn_rayleigh_shift,
    awgn_rayleigh_pa3,
    awgn_rician_pa3,
    awgn_rician_pa3_pn,
};

inline const char* scenario_kind_name(ScenarioKind k) {
    switch (k) {
        case ScenarioKind::awgn: return "awgn";
        case ScenarioKind::awgn_pn: return "awgn+pn";
        case ScenarioKind::awgn_rayleigh_shift: return "awgn+rayleigh_shift";
        case ScenarioKind::awgn_rayleigh_pa3: return "awgn+rayleigh_pa3";
        case ScenarioKind::awgn_rician_pa3: return "awgn+rician_pa3";
        case ScenarioKind::awgn_rician_pa3_pn: return "awgn+rician_pa3+pn";
    }
    throw std::invalid_argument("scenario_kind_name: unknown kind");
}

inline ScenarioKind parse_scenario_kind(const std::string& name) {
    for (ScenarioKind k :
         {ScenarioKind::awgn, ScenarioKind::awgn_pn, ScenarioKind::awgn_rayleigh_shift,
          ScenarioKind::awgn_rayleigh_pa3, ScenarioKind::awgn_rician_pa3,
          ScenarioKind::awgn_rician_pa3_pn})
        if (name == scenario_kind_name(k)) return k;
    throw std::invalid_argument("unknown scenario: " + name);
}

struct StopRule {
    long long min_errors = 100;
    long long max_bits = 10'000'000;
};

struct ScenarioConfig {
    ScenarioKind kind = ScenarioKind::awgn;
    double phase_angle_deg = 30.0;  // rayleigh_shift scenarios
    double k_factor = 1.0;          // rician scenarios
    int block_size = 512;
    int iterations = 5;
    int fft_length = 2048;
    std::vector<double> ebn0_points_db;
    std::uint64_t seed = 1;
    StopRule stop;
    double sample_rate_hz = 3.84e6;
    double carrier_hz = 2e9;
    double speed_kmh = 3.0;
    bool uncoded = false;         // bypass FEC, hard QPSK over the chain
    bool bypass_channel = false;  // skip all impairments (identity channel)
    int parallelism = 0;          // sweep workers; 0 = hardware concurrency

    double code_rate() const { return uncoded ? 1.0 : 0.25; }

    bool has_fading() const {
        return kind == ScenarioKind::awgn_rayleigh_shift ||
               kind == ScenarioKind::awgn_rayleigh_pa3 ||
               kind == ScenarioKind::awgn_rician_pa3 ||
               kind == ScenarioKind::awgn_rician_pa3_pn;
    }
    bool has_phase_noise() const {
        return kind == ScenarioKind::awgn_pn || kind == ScenarioKind::awgn_rician_pa3_pn;
    }

    std::string scenario_label() const {
        std::string s = scenario_kind_name(kind);
        char buf[48];
        if (kind == ScenarioKind::awgn_rayleigh_shift) {
            std::snprintf(buf, sizeof(buf), "(%gdeg)", phase_angle_deg);
            s += buf;
        } else if (kind == ScenarioKind::awgn_rician_pa3 ||
                   kind == ScenarioKind::awgn_rician_pa3_pn) {
            std::snprintf(buf, sizeof(buf), "(K=%g)", k_factor);
            const auto pos = s.find("+pn");
            s = pos == std::string::npos ? s + buf : s.substr(0, pos) + buf + "+pn";
        }
        if (uncoded) s += "+uncoded";
        return s;
    }
};

struct BerRecord {
    std::string scenario;
    double ebn0_db = 0.0;
    int iterations = 0;  // 0 marks the uncoded bypass
    int block_size = 0;
    long long bits = 0;
    long long errors = 0;
    double ber = 0.0;

    bool operator==(const BerRecord&) const = default;
};

// Hamming distance over the aligned overlap: decoded is expected to carry
// reference delayed by `delay` positions.
inline std::pair<long long, long long> ber_count(const BitBlock& reference,
                                                 const BitBlock& decoded,
                                                 std::size_t delay) {
    if (decoded.size() <= delay || reference.empty())
        throw std::invalid_argument("ber_count: no overlap after delay alignment");
    const std::size_t overlap = std::min(reference.size(), decoded.size() - delay);
    if (overlap == 0)
        throw std::invalid_argument("ber_count: no overlap after delay alignment");
    long long errors = 0;
    for (std::size_t i = 0; i < overlap; ++i)
        errors += (reference[i] & 1) != (decoded[i + delay] & 1);
    return {errors, static_cast<long long>(overlap)};
}

namespace detail {

inline void validate_config(const ScenarioConfig& cfg) {
    if (cfg.block_size < 2)
        throw std::invalid_argument("scenario: block size must be >= 2");
    if (cfg.iterations < 1 || cfg.iterations > 5)
        throw std::invalid_argument("scenario: iterations must be in 1..5");
    if (cfg.fft_length < 8 || !is_power_of_two(static_cast<std::size_t>(cfg.fft_length)))
        throw std::invalid_argument("scenario: fft length must be a power of two, >= 8");
    if (!(cfg.sample_rate_hz > 0.0))
        throw std::invalid_argument("scenario: sample rate must be positive");
    if (cfg.k_factor < 0.0)
        throw std::invalid_argument("scenario: K-factor must be nonnegative");
    if (cfg.stop.min_errors < 1 || cfg.stop.max_bits < 1)
        throw std::invalid_argument("scenario: stop rule must be positive");
    if (cfg.has_fading()) {
        const double fd = doppler_spread(cfg.carrier_hz, cfg.speed_kmh);
        if (fd >= cfg.sample_rate_hz / 2.0)
            throw std::invalid_argument("scenario: Doppler spread at or above Nyquist");
    }
}

// RNG lanes within one transmission group.
enum Lane : std::uint64_t { kLaneSource = 0, kLaneAwgn = 1, kLaneFading = 2, kLanePhase = 3 };

inline std::uint64_t stream_id(double ebn0_db, std::uint64_t group, std::uint64_t lane) {
    return mix64(std::bit_cast<std::uint64_t>(ebn0_db)) ^ mix64((group << 3) | lane);
}

// Interleaver streams are independent of the sweep point so encoder and
// decoder share one pair of permutations per seed.
inline constexpr std::uint64_t kStreamIl = 0x1b7e0;

inline std::pair<Interleaver, Interleaver> make_interleaver_pair(const ScenarioConfig& cfg) {
    RngStream rng(cfg.seed, kStreamIl);
    Interleaver il1 = Interleaver::random(static_cast<std::size_t>(cfg.block_size), rng);
    Interleaver il2 = Interleaver::random(static_cast<std::size_t>(cfg.block_size), rng);
    while (il2 == il1)
        il2 = Interleaver::random(static_cast<std::size_t>(cfg.block_size), rng);
    return {std::move(il1), std::move(il2)};
}

// Codewords stream across OFDM frame boundaries; one group is the shortest
// run of codewords that fills whole frames, so every trial is self-contained
// and the decode output aligns with the source at delay zero.
struct GroupGeometry {
    std::size_t codewords = 0;  // coded mode
    std::size_t frames = 0;
    std::size_t info_bits = 0;
};

inline GroupGeometry group_geometry(const ScenarioConfig& cfg, const OfdmGeometry& g) {
    GroupGeometry gg;
    if (cfg.uncoded) {
        gg.codewords = 0;
        gg.frames = 1;
        gg.info_bits = 2 * static_cast<std::size_t>(g.data_carriers);
        return gg;
    }
    const std::size_t per_cw = 2 * static_cast<std::size_t>(cfg.block_size);  // QPSK symbols
    const auto d = static_cast<std::size_t>(g.data_carriers);
    const std::size_t sym = std::lcm(per_cw, d);
    gg.codewords = sym / per_cw;
    gg.frames = sym / d;
    gg.info_bits = gg.codewords * static_cast<std::size_t>(cfg.block_size);
    return gg;
}

// The composite channel of the noise model: fading with perfect angle
// estimation, then phase noise, then AWGN. Noise is injected on the serial
// time-domain signal; the unscaled receive transform multiplies the noise
// variance by the transform length, so the per-symbol variance sigma2_sym
// maps to sigma2_sym / N at this point.
inline ComplexFrame apply_channel(const ScenarioConfig& cfg, const ComplexFrame& signal,
                                  double sigma2_time, double ebn0_db, std::uint64_t group) {
    if (cfg.bypass_channel) return signal;

    ComplexFrame y = signal;
    const double fd = doppler_spread(cfg.carrier_hz, cfg.speed_kmh);

    if (cfg.kind == ScenarioKind::awgn_rayleigh_shift) {
        FadingConfig fc;
        fc.k_factor = 0.0;
        fc.max_doppler_hz = fd;
        fc.profile = {{0.0, 0.0}};
        fc.sample_rate_hz = cfg.sample_rate_hz;
        fc.static_phase_rad = cfg.phase_angle_deg * kPi / 180.0;
        RngStream rng(cfg.seed, stream_id(ebn0_db, group, kLaneFading));
        const ChannelState state = generate_tap_gains(fc, y.size(), rng);
        const ComplexFrame faded = static_phase_rayleigh(y, fc.static_phase_rad, state);
        // The angle estimator tracks the fading process, not the static
        // offset, so the reference for recovery is the rotated clean signal.
        ComplexFrame rotated = y;
        const cplx rot(std::cos(fc.static_phase_rad), std::sin(fc.static_phase_rad));
        for (auto& v : rotated.samples) v *= rot;
        y = perfect_phase_recovery(faded, rotated);
    } else if (cfg.kind == ScenarioKind::awgn_rayleigh_pa3 ||
               cfg.kind == ScenarioKind::awgn_rician_pa3 ||
               cfg.kind == ScenarioKind::awgn_rician_pa3_pn) {
        FadingConfig fc;
        fc.k_factor = cfg.kind == ScenarioKind::awgn_rayleigh_pa3 ? 0.0 : cfg.k_factor;
        fc.max_doppler_hz = fd;
        fc.profile = FadingConfig::itu_pedestrian_a();
        fc.sample_rate_hz = cfg.sample_rate_hz;
        RngStream rng(cfg.seed, stream_id(ebn0_db, group, kLaneFading));
        const ChannelState state = generate_tap_gains(fc, y.size(), rng);
        const ComplexFrame faded = multipath_apply(y, state, fc);
        y = perfect_phase_recovery(faded, signal);
    }

    if (cfg.has_phase_noise()) {
        PhaseNoiseConfig pc;
        pc.sample_rate_hz = cfg.sample_rate_hz;
        RngStream rng(cfg.seed, stream_id(ebn0_db, group, kLanePhase));
        const std::vector<double> phase = phase_noise_sequence(y.size(), pc, rng);
        y = apply_phase_noise(y, phase);
    }

    RngStream rng(cfg.seed, stream_id(ebn0_db, group, kLaneAwgn));
    return add_awgn(y, sigma2_time, rng);
}

struct GroupOutcome {
    std::vector<long long> errors;  // per iteration; single entry when uncoded
    long long bits = 0;
};

inline GroupOutcome run_group(const ScenarioConfig& cfg, double ebn0_db, std::uint64_t group,
                              const OfdmGeometry& geom, const GroupGeometry& gg,
                              const Trellis& trellis, const Interleaver& il1,
                              const Interleaver& il2, double sigma2_sym, double sigma2_time) {
    RngStream source_rng(cfg.seed, stream_id(ebn0_db, group, kLaneSource));

    // equiprobable source bits
    BitBlock source(gg.info_bits);
    for (auto& b : source) b = static_cast<std::uint8_t>(source_rng.next_u32() & 1u);

    // encode and map to QPSK symbols
    std::vector<cplx> symbols;
    if (cfg.uncoded) {
        symbols = qpsk_modulate(source);
    } else {
        BitBlock coded;
        coded.reserve(4 * gg.info_bits);
        for (std::size_t c = 0; c < gg.codewords; ++c) {
            BitBlock block(source.begin() + static_cast<std::ptrdiff_t>(c * cfg.block_size),
                           source.begin() + static_cast<std::ptrdiff_t>((c + 1) * cfg.block_size));
            const PcccCodeword cw = pccc_encode(block, trellis, il1, il2);
            coded.insert(coded.end(), cw.multiplexed.begin(), cw.multiplexed.end());
        }
        symbols = qpsk_modulate(coded);
    }

    // frame-by-frame OFDM modulation onto one serial time signal
    const auto d = static_cast<std::size_t>(geom.data_carriers);
    ComplexFrame serial(gg.frames * static_cast<std::size_t>(geom.symbol_length()), Domain::time);
    for (std::size_t f = 0; f < gg.frames; ++f) {
        ComplexFrame data(d, Domain::frequency);
        std::copy_n(symbols.begin() + static_cast<std::ptrdiff_t>(f * d), d, data.samples.begin());
        const ComplexFrame tx = ofdm_modulate(data, geom);
        std::copy(tx.samples.begin(), tx.samples.end(),
                  serial.samples.begin() + static_cast<std::ptrdiff_t>(f * tx.size()));
    }

    const ComplexFrame received = apply_channel(cfg, serial, sigma2_time, ebn0_db, group);

    // receiver: per-frame demodulation back to a serial symbol stream
    std::vector<cplx> rx_symbols(gg.frames * d);
    const auto frame_len = static_cast<std::size_t>(geom.symbol_length());
    for (std::size_t f = 0; f < gg.frames; ++f) {
        ComplexFrame slice(frame_len, Domain::time);
        std::copy_n(received.samples.begin() + static_cast<std::ptrdiff_t>(f * frame_len),
                    frame_len, slice.samples.begin());
        const ComplexFrame data = ofdm_demodulate(slice, geom);
        std::copy(data.samples.begin(), data.samples.end(),
                  rx_symbols.begin() + static_cast<std::ptrdiff_t>(f * d));
    }

    const BitBlock hard = qpsk_demodulate_hard(rx_symbols);

    GroupOutcome out;
    if (cfg.uncoded) {
        const auto [e, b] = ber_count(source, hard, 0);
        out.errors = {e};
        out.bits = b;
        return out;
    }

    const LlrBlock llr = scale_received(to_bipolar(hard), sigma2_sym);
    out.errors.assign(static_cast<std::size_t>(cfg.iterations), 0);
    const auto n = static_cast<std::size_t>(cfg.block_size);
    for (std::size_t c = 0; c < gg.codewords; ++c) {
        DecoderInput in;
        in.systematic.resize(n);
        for (auto& p : in.parity) p.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t base = 4 * (c * n + i);
            in.systematic[i] = llr[base + 0];
            in.parity[0][i] = llr[base + 1];
            in.parity[1][i] = llr[base + 2];
            in.parity[2][i] = llr[base + 3];
        }
        in.il1 = &il1;
        in.il2 = &il2;
        const std::vector<BitBlock> decisions =
            turbo_decode_iterations(in, cfg.iterations, trellis);
        const BitBlock block(source.begin() + static_cast<std::ptrdiff_t>(c * n),
                             source.begin() + static_cast<std::ptrdiff_t>((c + 1) * n));
        for (std::size_t it = 0; it < decisions.size(); ++it) {
            const auto [e, b] = ber_count(block, decisions[it], 0);
            out.errors[it] += e;
            if (it + 1 == decisions.size()) out.bits += b;
        }
    }
    return out;
}

}  // namespace detail

// One Eb/N0 point, reported after each decoder iteration (the decoder runs
// once at the full iteration count; earlier decisions are a prefix of the
// same pass). Uncoded mode yields a single record with iterations = 0.
// Blocks are drawn until min_errors accumulate at the final iteration count
// or max_bits have been compared, whichever comes first.
inline std::vector<BerRecord> run_point_iterations(const ScenarioConfig& cfg, double ebn0_db) {
    detail::validate_config(cfg);

    const OfdmGeometry geom = OfdmGeometry::from_fft_length(cfg.fft_length);
    const detail::GroupGeometry gg = detail::group_geometry(cfg, geom);
    const Trellis trellis = Trellis::rsc();
    auto [il1, il2] = cfg.uncoded
                          ? std::pair<Interleaver, Interleaver>{Interleaver({0, 1}), Interleaver({0, 1})}
                          : detail::make_interleaver_pair(cfg);

    AwgnConfig awgn;
    awgn.ebn0_db = ebn0_db;
    awgn.code_rate = cfg.code_rate();
    const double sigma2_sym = noise_variance(awgn);
    const double sigma2_time = sigma2_sym / static_cast<double>(cfg.fft_length);

    const std::size_t lanes = cfg.uncoded ? 1 : static_cast<std::size_t>(cfg.iterations);
    std::vector<long long> errors(lanes, 0);
    long long bits = 0;
    for (std::uint64_t group = 0;; ++group) {
        const detail::GroupOutcome out = detail::run_group(
            cfg, ebn0_db, group, geom, gg, trellis, il1, il2, sigma2_sym, sigma2_time);
        for (std::size_t i = 0; i < lanes; ++i) errors[i] += out.errors[i];
        bits += out.bits;
        if (errors.back() >= cfg.stop.min_errors || bits >= cfg.stop.max_bits) break;
    }

    std::vector<BerRecord> records(lanes);
    for (std::size_t i = 0; i < lanes; ++i) {
        records[i].scenario = cfg.scenario_label();
        records[i].ebn0_db = ebn0_db;
        records[i].iterations = cfg.uncoded ? 0 : static_cast<int>(i) + 1;
        records[i].block_size = cfg.block_size;
        records[i].bits = bits;
        records[i].errors = errors[i];
        records[i].ber = static_cast<double>(errors[i]) / static_cast<double>(bits);
    }
    return records;
}

inline BerRecord run_point(const ScenarioConfig& cfg, double ebn0_db) {
    return run_point_iterations(cfg, ebn0_db).back();
}

// Full Eb/N0 sweep. Points use disjoint RNG streams, so they are independent
// and safe to run concurrently; output order does not depend on scheduling.
inline std::vector<BerRecord> run_sweep(const ScenarioConfig& cfg) {
    if (cfg.ebn0_points_db.empty())
        throw std::invalid_argument("run_sweep: empty Eb/N0 list");
    detail::validate_config(cfg);

    const std::size_t n_points = cfg.ebn0_points_db.size();
    std::vector<std::vector<BerRecord>> slots(n_points);

    unsigned workers = cfg.parallelism > 0 ? static_cast<unsigned>(cfg.parallelism)
                                           : std::thread::hardware_concurrency();
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n_points)));

    std::atomic<std::size_t> next{0};
    auto drain = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n_points) break;
            slots[i] = run_point_iterations(cfg, cfg.ebn0_points_db[i]);
        }
    };
    if (workers <= 1) {
        drain();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(drain);
        for (auto& t : pool) t.join();
    }

    std::vector<BerRecord> records;
    for (auto& s : slots) records.insert(records.end(), s.begin(), s.end());
    return records;
}

namespace detail {

inline std::string format_double(const char* fmt, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), fmt, v);
    return buf;
}

inline const char* kPlotTemplate = R"PY(#!/usr/bin/env python3
"""Render BER curves: one figure per scenario, one curve per iteration count."""
import csv
import os
import re
from collections import defaultdict

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))
with open(os.path.join(here, "@CSV@"), newline="") as f:
    rows = list(csv.DictReader(f))

curves = defaultdict(lambda: defaultdict(list))
for r in rows:
    curves[r["scenario"]][int(r["iterations"])].append(
        (float(r["ebn0_db"]), float(r["ber"])))

for scenario in sorted(curves):
    fig, ax = plt.subplots(figsize=(6.5, 4.5))
    for it in sorted(curves[scenario]):
        pts = sorted(curves[scenario][it])
        label = "uncoded" if it == 0 else "%d iteration%s" % (it, "" if it == 1 else "s")
        ax.semilogy([p[0] for p in pts], [max(p[1], 1e-12) for p in pts],
                    marker="o", label=label)
    ax.set_xlabel("Eb/N0 (dB)")
    ax.set_ylabel("BER")
    ax.set_title(scenario)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    safe = re.sub(r"[^A-Za-z0-9]+", "_", scenario).strip("_")
    fig.tight_layout()
    fig.savefig(os.path.join(here, "@STEM@_%s.png" % safe), dpi=150)
    plt.close(fig)
)PY";

}  // namespace detail

// Write records as CSV (sorted by scenario, iterations, Eb/N0) plus a plot
// script alongside that renders the log-BER layout, one file per scenario.
// Emission is a pure function of the records: identical input, identical bytes.
inline void emit_results(const std::vector<BerRecord>& records, const std::string& csv_path) {
    if (records.empty())
        throw std::invalid_argument("emit_results: no records");

    std::vector<BerRecord> sorted = records;
    std::sort(sorted.begin(), sorted.end(), [](const BerRecord& a, const BerRecord& b) {
        if (a.scenario != b.scenario) return a.scenario < b.scenario;
        if (a.iterations != b.iterations) return a.iterations < b.iterations;
        return a.ebn0_db < b.ebn0_db;
    });

    std::ofstream csv(csv_path, std::ios::binary | std::ios::trunc);
    if (!csv)
        throw std::runtime_error("emit_results: cannot write " + csv_path);
    csv << "scenario,ebn0_db,iterations,block_size,bits,errors,ber\n";
    for (const auto& r : sorted) {
        csv << r.scenario << ',' << detail::format_double("%g", r.ebn0_db) << ','
            << r.iterations << ',' << r.block_size << ',' << r.bits << ',' << r.errors << ','
            << detail::format_double("%.6g", r.ber) << '\n';
    }
    if (!csv.flush())
        throw std::runtime_error("emit_results: write failed for " + csv_path);

    const std::size_t slash = csv_path.find_last_of("/\\");
    const std::size_t dot = csv_path.find_last_of('.');
    const std::string stem_path =
        (dot == std::string::npos || (slash != std::string::npos && dot < slash))
            ? csv_path
            : csv_path.substr(0, dot);
    const std::string base = slash == std::string::npos ? csv_path : csv_path.substr(slash + 1);
    const std::size_t stem_slash = stem_path.find_last_of("/\\");
    const std::string stem_base =
        stem_slash == std::string::npos ? stem_path : stem_path.substr(stem_slash + 1);

    std::string script = detail::kPlotTemplate;
    auto replace_all = [](std::string& text, const std::string& what, const std::string& with) {
        for (std::size_t pos = text.find(what); pos != std::string::npos;
             pos = text.find(what, pos + with.size()))
            text.replace(pos, what.size(), with);
    };
    replace_all(script, "@CSV@", base);
    replace_all(script, "@STEM@", stem_base);

    const std::string script_path = stem_path + "_plot.py";
    std::ofstream py(script_path, std::ios::binary | std::ios::trunc);
    if (!py)
        throw std::runtime_error("emit_results: cannot write " + script_path);
    py << script;
    if (!py.flush())
        throw std::runtime_error("emit_results: write failed for " + script_path);
}

}  // namespace tcofdm
