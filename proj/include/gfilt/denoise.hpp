#pragma once

#include "gfilt/filter.hpp"
#include "gfilt/graph.hpp"
#include "gfilt/shift.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace gfilt {

/// Time-varying multichannel signal on a product graph: T time steps, n
/// spatial vertices, c channels. Each channel's vectorized view is
/// time-major: entry (t, i) sits at index t*n + i.
class SpatioTemporalSignal {
public:
    SpatioTemporalSignal(std::size_t time_len, std::size_t spatial_len, std::size_t channels);

    std::size_t time_len() const { return time_len_; }
    std::size_t spatial_len() const { return spatial_len_; }
    std::size_t channels() const { return channels_.size(); }
    std::size_t size() const { return time_len_ * spatial_len_ * channels_.size(); }

    double& at(std::size_t t, std::size_t i, std::size_t ch) { return channels_[ch][t * spatial_len_ + i]; }
    double at(std::size_t t, std::size_t i, std::size_t ch) const { return channels_[ch][t * spatial_len_ + i]; }
    std::vector<double>& channel(std::size_t ch) { return channels_[ch]; }
    const std::vector<double>& channel(std::size_t ch) const { return channels_[ch]; }

    double frobenius_norm() const;

private:
    std::size_t time_len_;
    std::size_t spatial_len_;
    std::vector<std::vector<double>> channels_;
};

/// The Tikhonov problem argmin_z ||z - w~||^2 + gamma1 z'S1z + gamma2 z'S2z
/// has the closed form w^ = (I + gamma1 S1 + gamma2 S2)^{-1} w~; this builds
/// that filter: h(t1,t2) = 1 + gamma1 t1 + gamma2 t2 on [0,2]^2, which stays
/// >= 1 for all nonnegative penalties. Shifts must be commuting symmetric
/// PSD (normalized-Laplacian Kronecker lifts in the experiments).
FilterSpec tikhonov_filterspec(double gamma1, double gamma2, const Shift& s1, const Shift& s2);

/// W~ = W + lambda eta with eta i.i.d. standard normal and
/// lambda = fraction ||W||_F / sqrt(T n c), so E||lambda eta||_F =
/// fraction ||W||_F.
SpatioTemporalSignal add_noise(const SpatioTemporalSignal& w, double fraction, std::uint64_t seed);

/// SNR in decibels: -20 log10(||w^ - w|| / ||w||); perfect recovery is
/// capped at +300 dB.
double snr(std::span<const double> w_hat, std::span<const double> w);
double snr(const SpatioTemporalSignal& w_hat, const SpatioTemporalSignal& w);

struct SynthDataset {
    SpatioTemporalSignal signal;
    Graph spatial;
    Graph temporal;
    std::vector<std::vector<double>> points;
};

/// Synthetic stand-in for a motion-capture-style dataset: a random 3-D
/// point cloud, its kNN graph, a path in time, and a 3-channel signal made
/// by pushing white noise through (I + smoothness L)^{-1} on each factor
/// (then rescaled to the unsmoothed norm).
SynthDataset synth_dataset(std::size_t time_len, std::size_t n_points, std::size_t k,
                           double smoothness, std::uint64_t seed);

enum class SweepSolver { cipa, ogda, arma };

const char* solver_name(SweepSolver s);

struct DenoiseOutcome {
    SpatioTemporalSignal signal;
    bool diverged = false;
};

/// Runs one denoising pass channel-by-channel with the chosen solver.
/// For ARMA, a divergence probe (probe_iters of the recursion, growth
/// guard on) classifies the grid point before the reported m iterations.
DenoiseOutcome denoise_signal(SweepSolver solver, const SpatioTemporalSignal& noisy,
                              double gamma1, double gamma2, const Shift& s1, const Shift& s2,
                              std::size_t degree, std::size_t iters,
                              std::size_t probe_iters = 300);

struct SweepRow {
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    double fraction = 0.0;
    double mean_snr = 0.0;
    std::size_t trials = 0;
};

struct SweepResult {
    SweepSolver solver;
    std::size_t degree = 0;
    std::size_t iters = 0;
    std::uint64_t seed = 0;
    std::vector<SweepRow> rows;
};

/// Mean output SNR over noise trials for every (gamma1, gamma2, fraction)
/// combination, floored at -5 dB; solver divergence records the floor.
SweepResult denoise_sweep(const SpatioTemporalSignal& w, const Shift& s1, const Shift& s2,
                          const std::vector<double>& fractions,
                          const std::vector<double>& gamma_grid, SweepSolver solver,
                          std::size_t degree, std::size_t iters, std::size_t trials,
                          std::uint64_t seed);

/// Columns: gamma1,gamma2,solver,M,m,mean_snr,trials,seed (one file per
/// sweep; the noise fraction of each row is in the leading meta comment).
void write_sweep_csv(std::ostream& out, const SweepResult& result);

/// Dataset file: header "T n c" then the T*n*c values in (t, i, ch) order,
/// channel fastest.
void write_dataset(std::ostream& out, const SpatioTemporalSignal& w);
SpatioTemporalSignal read_dataset(std::istream& in);

} // namespace gfilt
