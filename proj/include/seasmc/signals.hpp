#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace seasmc {

/**
 * @brief Deterministic catalogue of scalar time signals.
 *
 * Signals drive references, torque disturbances and environment motion.
 * Every entry is smooth inside its active window and exposes analytic
 * derivatives up to fourth order, so estimator and controller tests can
 * compare against exact ground truth instead of finite differences.
 * Pseudo-random signals are generated from an internal 64-bit mixer and
 * reproduce bit-identically for a given seed on every platform.
 */
class Signal {
 public:
  /// Identically zero signal.
  Signal() = default;

  static Signal zero() { return Signal(); }

  static Signal constant(double value) {
    Signal s;
    s.kind_ = Kind::kConstant;
    s.amplitude_ = check_finite(value, "constant value");
    return s;
  }

  /// 0 before t_start, `value` afterwards.  Derivatives are zero away from
  /// the jump instant.
  static Signal step(double value, double t_start = 0.0) {
    Signal s;
    s.kind_ = Kind::kStep;
    s.amplitude_ = check_finite(value, "step value");
    s.t_on_ = check_finite(t_start, "step start time");
    return s;
  }

  /// offset + amplitude * sin(2*pi*freq_hz*t + phase).
  static Signal sine(double amplitude, double freq_hz, double phase = 0.0,
                     double offset = 0.0) {
    if (!(freq_hz >= 0.0) || !std::isfinite(freq_hz)) {
      throw std::invalid_argument(
          "seasmc::Signal::sine: frequency must be finite and nonnegative");
    }
    Signal s;
    s.kind_ = Kind::kSine;
    s.amplitude_ = check_finite(amplitude, "sine amplitude");
    s.omega_ = 2.0 * std::numbers::pi * freq_hz;
    s.phase_ = check_finite(phase, "sine phase");
    s.offset_ = check_finite(offset, "sine offset");
    return s;
  }

  /**
   * @brief Band-limited pseudo-random torque burst.
   *
   * A seeded sum of `modes` sinusoids with frequencies spread over
   * (0, cutoff_hz], scaled so the steady waveform has the requested RMS,
   * and gated to [t_on, t_off).  Being a finite sum of sines it stays
   * infinitely differentiable inside the window.
   */
  static Signal random_burst(double rms, double cutoff_hz, double t_on,
                             double t_off, std::uint64_t seed,
                             int modes = 24) {
    if (!(rms >= 0.0) || !(cutoff_hz > 0.0) || modes < 1 || !(t_off > t_on)) {
      throw std::invalid_argument(
          "seasmc::Signal::random_burst: need rms >= 0, cutoff > 0, "
          "modes >= 1 and t_off > t_on");
    }
    Signal s;
    s.kind_ = Kind::kBurst;
    s.t_on_ = t_on;
    s.t_off_ = t_off;
    s.amplitude_ = rms * std::sqrt(2.0 / static_cast<double>(modes));
    std::uint64_t state = seed;
    s.mode_omega_.reserve(static_cast<std::size_t>(modes));
    s.mode_phase_.reserve(static_cast<std::size_t>(modes));
    for (int i = 0; i < modes; ++i) {
      // Keep mode frequencies away from DC so the burst has zero mean.
      const double f = cutoff_hz * (0.05 + 0.95 * unit_double(state));
      s.mode_omega_.push_back(2.0 * std::numbers::pi * f);
      s.mode_phase_.push_back(2.0 * std::numbers::pi * unit_double(state));
    }
    return s;
  }

  double value(double t) const { return derivative(t, 0); }

  /// n-th time derivative, n in [0, 4].
  double derivative(double t, int n) const {
    if (n < 0 || n > 4) {
      throw std::invalid_argument(
          "seasmc::Signal::derivative: order must be in [0, 4]");
    }
    switch (kind_) {
      case Kind::kZero:
        return 0.0;
      case Kind::kConstant:
        return n == 0 ? amplitude_ : 0.0;
      case Kind::kStep:
        if (n > 0 || t < t_on_) return 0.0;
        return amplitude_;
      case Kind::kSine: {
        const double shifted = omega_ * t + phase_ +
                               static_cast<double>(n) * std::numbers::pi / 2.0;
        double d = amplitude_ * std::pow(omega_, n) * std::sin(shifted);
        if (n == 0) d += offset_;
        return d;
      }
      case Kind::kBurst: {
        if (t < t_on_ || t >= t_off_) return 0.0;
        double out = 0.0;
        for (std::size_t i = 0; i < mode_omega_.size(); ++i) {
          const double w = mode_omega_[i];
          out += amplitude_ * std::pow(w, n) *
                 std::sin(w * t + mode_phase_[i] +
                          static_cast<double>(n) * std::numbers::pi / 2.0);
        }
        return out;
      }
    }
    return 0.0;
  }

  bool is_zero() const { return kind_ == Kind::kZero; }

 private:
  enum class Kind { kZero, kConstant, kStep, kSine, kBurst };

  static double check_finite(double v, const char* what) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument(std::string("seasmc::Signal: ") + what +
                                  " must be finite");
    }
    return v;
  }

  // SplitMix64: tiny, well-known mixer with identical output everywhere.
  static std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  static double unit_double(std::uint64_t& state) {
    return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;  // [0,1)
  }

  Kind kind_ = Kind::kZero;
  double amplitude_ = 0.0;
  double omega_ = 0.0;
  double phase_ = 0.0;
  double offset_ = 0.0;
  double t_on_ = 0.0;
  double t_off_ = 0.0;
  std::vector<double> mode_omega_;
  std::vector<double> mode_phase_;
};

}  // namespace seasmc
