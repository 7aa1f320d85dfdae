#include "kvstring/signals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "kvstring/error.hpp"

namespace kvstring {

namespace {

constexpr double kPi = std::numbers::pi;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// 64 (s(1-s))^3 and its first two derivatives in s.
double bump(double s) {
  const double q = s * (1.0 - s);
  return 64.0 * q * q * q;
}
double bump_d1(double s) {
  const double q = s * (1.0 - s);
  return 192.0 * q * q * (1.0 - 2.0 * s);
}
double bump_d2(double s) {
  const double q = s * (1.0 - s);
  const double dq = 1.0 - 2.0 * s;
  return 192.0 * (2.0 * q * dq * dq - 2.0 * q * q);
}

struct HermiteSpan {
  std::size_t i;
  double h;
  double s;
};

HermiteSpan locate(const signal::Sampled& d, double t) {
  const auto& ts = d.times;
  if (t < ts.front() - 1e-12 || t > ts.back() + 1e-12) {
    throw Error(ErrorKind::InvalidArgument,
                "sampled signal queried outside its time range at t=" + std::to_string(t));
  }
  auto it = std::upper_bound(ts.begin(), ts.end(), t);
  std::size_t i = it == ts.begin() ? 0 : static_cast<std::size_t>(it - ts.begin()) - 1;
  i = std::min(i, ts.size() - 2);
  const double h = ts[i + 1] - ts[i];
  return {i, h, std::clamp((t - ts[i]) / h, 0.0, 1.0)};
}

// Quintic Hermite basis (and derivatives of order `order` in s).
void quintic_basis(double s, int order, double b[6]) {
  const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
  switch (order) {
    case 0:
      b[0] = 1 - 10 * s3 + 15 * s4 - 6 * s5;
      b[1] = s - 6 * s3 + 8 * s4 - 3 * s5;
      b[2] = 0.5 * (s2 - 3 * s3 + 3 * s4 - s5);
      b[3] = 10 * s3 - 15 * s4 + 6 * s5;
      b[4] = -4 * s3 + 7 * s4 - 3 * s5;
      b[5] = 0.5 * (s3 - 2 * s4 + s5);
      break;
    case 1:
      b[0] = -30 * s2 + 60 * s3 - 30 * s4;
      b[1] = 1 - 18 * s2 + 32 * s3 - 15 * s4;
      b[2] = 0.5 * (2 * s - 9 * s2 + 12 * s3 - 5 * s4);
      b[3] = 30 * s2 - 60 * s3 + 30 * s4;
      b[4] = -12 * s2 + 28 * s3 - 15 * s4;
      b[5] = 0.5 * (3 * s2 - 8 * s3 + 5 * s4);
      break;
    default:
      b[0] = -60 * s + 180 * s2 - 120 * s3;
      b[1] = -36 * s + 96 * s2 - 60 * s3;
      b[2] = 0.5 * (2 - 18 * s + 36 * s2 - 20 * s3);
      b[3] = 60 * s - 180 * s2 + 120 * s3;
      b[4] = -24 * s + 84 * s2 - 60 * s3;
      b[5] = 0.5 * (6 * s - 24 * s2 + 20 * s3);
      break;
  }
}

double hermite_eval(const signal::Sampled& d, double t, int order) {
  const HermiteSpan sp = locate(d, t);
  double b[6];
  quintic_basis(sp.s, order, b);
  const std::size_t i = sp.i;
  const double h = sp.h;
  const double v = b[0] * d.values[i] + h * b[1] * d.first[i] + h * h * b[2] * d.second[i] +
                   b[3] * d.values[i + 1] + h * b[4] * d.first[i + 1] +
                   h * h * b[5] * d.second[i + 1];
  return v / std::pow(h, order);
}

void validate(const signal::Sampled& d) {
  const std::size_t n = d.times.size();
  if (n < 2 || d.values.size() != n || d.first.size() != n || d.second.size() != n) {
    throw Error(ErrorKind::InvalidArgument,
                "sampled signal needs >= 2 knots with value, first and second derivative");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(d.times[i] > d.times[i - 1])) {
      throw Error(ErrorKind::InvalidArgument, "sampled signal times must increase");
    }
  }
}

double sine_sup(const signal::Sine& s, double t) {
  double omega = s.frequency;
  double phase = s.phase;
  double amp = std::abs(s.amplitude);
  if (omega == 0.0) return amp * std::abs(std::sin(phase));
  if (omega < 0.0) {
    omega = -omega;
    phase = -phase;
  }
  // First crest of |sin| at omega s + phase = pi/2 + m pi with s >= 0.
  const double m = std::ceil((phase - 0.5 * kPi) / kPi - 1e-15);
  const double first_crest = (0.5 * kPi + m * kPi - phase) / omega;
  if (first_crest <= t) return amp;
  return amp * std::max(std::abs(std::sin(phase)), std::abs(std::sin(omega * t + phase)));
}

}  // namespace

BoundarySignal::BoundarySignal(Kind kind, std::string description)
    : kind_(std::move(kind)), description_(std::move(description)) {
  std::visit(Overloaded{
                 [](const signal::Zero&) {},
                 [](const signal::Sine&) {},
                 [](const signal::DecayingExp& d) {
                   if (d.rate < 0.0) {
                     throw Error(ErrorKind::InvalidArgument, "decay rate must be >= 0");
                   }
                 },
                 [](const signal::PolyPulse& p) {
                   if (!(p.t1 > p.t0) || p.t0 < 0.0) {
                     throw Error(ErrorKind::InvalidArgument, "pulse needs 0 <= t0 < t1");
                   }
                 },
                 [](const signal::Sampled& s) { validate(s); },
             },
             kind_);
}

double BoundarySignal::value(double t) const {
  return std::visit(
      Overloaded{
          [](const signal::Zero&) { return 0.0; },
          [t](const signal::Sine& s) { return s.amplitude * std::sin(s.frequency * t + s.phase); },
          [t](const signal::DecayingExp& d) { return d.amplitude * std::exp(-d.rate * t); },
          [t](const signal::PolyPulse& p) {
            if (t <= p.t0 || t >= p.t1) return 0.0;
            return p.amplitude * bump((t - p.t0) / (p.t1 - p.t0));
          },
          [t](const signal::Sampled& s) { return hermite_eval(s, t, 0); },
      },
      kind_);
}

double BoundarySignal::derivative(double t) const {
  return std::visit(
      Overloaded{
          [](const signal::Zero&) { return 0.0; },
          [t](const signal::Sine& s) {
            return s.amplitude * s.frequency * std::cos(s.frequency * t + s.phase);
          },
          [t](const signal::DecayingExp& d) {
            return -d.rate * d.amplitude * std::exp(-d.rate * t);
          },
          [t](const signal::PolyPulse& p) {
            if (t <= p.t0 || t >= p.t1) return 0.0;
            const double w = p.t1 - p.t0;
            return p.amplitude * bump_d1((t - p.t0) / w) / w;
          },
          [t](const signal::Sampled& s) { return hermite_eval(s, t, 1); },
      },
      kind_);
}

double BoundarySignal::second_derivative(double t) const {
  return std::visit(
      Overloaded{
          [](const signal::Zero&) { return 0.0; },
          [t](const signal::Sine& s) {
            return -s.amplitude * s.frequency * s.frequency * std::sin(s.frequency * t + s.phase);
          },
          [t](const signal::DecayingExp& d) {
            return d.rate * d.rate * d.amplitude * std::exp(-d.rate * t);
          },
          [t](const signal::PolyPulse& p) {
            if (t <= p.t0 || t >= p.t1) return 0.0;
            const double w = p.t1 - p.t0;
            return p.amplitude * bump_d2((t - p.t0) / w) / (w * w);
          },
          [t](const signal::Sampled& s) { return hermite_eval(s, t, 2); },
      },
      kind_);
}

double BoundarySignal::sup_abs(double t) const {
  return std::visit(Overloaded{
                        [](const signal::Zero&) { return 0.0; },
                        [t](const signal::Sine& s) { return sine_sup(s, t); },
                        [](const signal::DecayingExp& d) { return std::abs(d.amplitude); },
                        [this, t](const signal::PolyPulse& p) {
                          if (t >= 0.5 * (p.t0 + p.t1)) return std::abs(p.amplitude);
                          return std::abs(value(t));
                        },
                        [this, t](const signal::Sampled& s) {
                          double m = std::abs(value(t));
                          for (std::size_t i = 0; i < s.times.size() && s.times[i] <= t; ++i) {
                            m = std::max(m, std::abs(s.values[i]));
                          }
                          return m;
                        },
                    },
                    kind_);
}

double BoundarySignal::horizon() const {
  if (const auto* s = std::get_if<signal::Sampled>(&kind_)) return s->times.back();
  return std::numeric_limits<double>::infinity();
}

namespace {

double profile_l2(const std::vector<cplx>& f, const UniformGrid& grid) {
  std::vector<double> sq(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) sq[i] = std::norm(f[i]);
  return std::sqrt(std::max(0.0, integrate(sq, grid)));
}

}  // namespace

DistributedSignal::DistributedSignal(Kind kind, std::string description)
    : kind_(std::move(kind)), description_(std::move(description)) {
  if (const auto* s = std::get_if<signal::Separable>(&kind_)) {
    if (s->profile.size() != s->grid.size()) {
      throw Error(ErrorKind::GridMismatch, "separable profile does not match its grid");
    }
    profile_norm_ = profile_l2(s->profile, s->grid);
  } else if (const auto* tb = std::get_if<signal::Table>(&kind_)) {
    if (tb->times.size() < 2 || tb->rows.size() != tb->times.size()) {
      throw Error(ErrorKind::InvalidArgument, "table signal needs one row per time, >= 2 rows");
    }
    for (std::size_t i = 0; i < tb->rows.size(); ++i) {
      if (tb->rows[i].size() != tb->grid.size()) {
        throw Error(ErrorKind::GridMismatch, "table row does not match the table grid");
      }
      if (i > 0 && !(tb->times[i] > tb->times[i - 1])) {
        throw Error(ErrorKind::InvalidArgument, "table times must increase");
      }
    }
  }
}

namespace {

struct TableSpan {
  std::size_t i;
  double s;
};

TableSpan locate_row(const signal::Table& tb, double t) {
  if (t < tb.times.front() - 1e-12 || t > tb.times.back() + 1e-12) {
    throw Error(ErrorKind::InvalidArgument, "table signal queried outside its time range");
  }
  auto it = std::upper_bound(tb.times.begin(), tb.times.end(), t);
  std::size_t i = it == tb.times.begin() ? 0 : static_cast<std::size_t>(it - tb.times.begin()) - 1;
  i = std::min(i, tb.times.size() - 2);
  return {i, std::clamp((t - tb.times[i]) / (tb.times[i + 1] - tb.times[i]), 0.0, 1.0)};
}

}  // namespace

std::vector<cplx> DistributedSignal::samples_at(double t) const {
  return std::visit(Overloaded{
                        [](const signal::Zero&) { return std::vector<cplx>{}; },
                        [t](const signal::Separable& s) {
                          std::vector<cplx> out = s.profile;
                          const double g = s.time_factor.value(t);
                          for (auto& v : out) v *= g;
                          return out;
                        },
                        [t](const signal::Table& tb) {
                          const TableSpan sp = locate_row(tb, t);
                          std::vector<cplx> out(tb.grid.size());
                          for (std::size_t j = 0; j < out.size(); ++j) {
                            out[j] = (1.0 - sp.s) * tb.rows[sp.i][j] + sp.s * tb.rows[sp.i + 1][j];
                          }
                          return out;
                        },
                    },
                    kind_);
}

double DistributedSignal::l2_norm_at(double t) const {
  return std::visit(Overloaded{
                        [](const signal::Zero&) { return 0.0; },
                        [this, t](const signal::Separable& s) {
                          return profile_norm_ * std::abs(s.time_factor.value(t));
                        },
                        [this, t](const signal::Table& tb) {
                          return profile_l2(samples_at(t), tb.grid);
                        },
                    },
                    kind_);
}

double DistributedSignal::sup_l2(double t) const {
  return std::visit(Overloaded{
                        [](const signal::Zero&) { return 0.0; },
                        [this, t](const signal::Separable& s) {
                          return profile_norm_ * s.time_factor.sup_abs(t);
                        },
                        [this, t](const signal::Table& tb) {
                          double m = l2_norm_at(t);
                          for (std::size_t i = 0; i < tb.times.size() && tb.times[i] <= t; ++i) {
                            m = std::max(m, profile_l2(tb.rows[i], tb.grid));
                          }
                          return m;
                        },
                    },
                    kind_);
}

cplx DistributedSignal::value(double t, double x) const {
  const std::vector<cplx> row = samples_at(t);
  if (row.empty()) return {0.0, 0.0};
  const std::size_t n = row.size() - 1;
  const double s = std::clamp(x, 0.0, 1.0) * static_cast<double>(n);
  const auto i = std::min(static_cast<std::size_t>(s), n - 1);
  const double frac = s - static_cast<double>(i);
  return (1.0 - frac) * row[i] + frac * row[i + 1];
}

double DistributedSignal::horizon() const {
  if (const auto* s = std::get_if<signal::Separable>(&kind_)) return s->time_factor.horizon();
  if (const auto* tb = std::get_if<signal::Table>(&kind_)) return tb->times.back();
  return std::numeric_limits<double>::infinity();
}

}  // namespace kvstring
