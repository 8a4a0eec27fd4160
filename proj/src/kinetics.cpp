#include "hsgate/kinetics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "hsgate/error.hpp"

namespace hsgate {

namespace {

struct Channel {
  std::vector<int> reactants;
  std::vector<int> products;
  double k = 0.0;
};

/// Network flattened to index form; extra columns for inert injected species.
struct Compiled {
  std::vector<std::string> species;
  std::vector<Channel> channels;
  std::map<std::string, int> index;

  explicit Compiled(const ReactionNetwork& net) {
    for (const auto& s : net.species()) add(s.name);
    for (const auto& r : net.expanded()) {
      Channel c;
      c.k = r.k_forward;
      for (const auto& n : r.reactants) c.reactants.push_back(index.at(n));
      for (const auto& n : r.products) c.products.push_back(index.at(n));
      channels.push_back(std::move(c));
    }
  }

  int add(const std::string& name) {
    auto [it, fresh] = index.emplace(name, static_cast<int>(species.size()));
    if (fresh) species.push_back(name);
    return it->second;
  }

  void rhs(const std::vector<double>& y, std::vector<double>& dy) const {
    std::fill(dy.begin(), dy.end(), 0.0);
    for (const auto& c : channels) {
      double rate = c.k;
      for (int i : c.reactants) rate *= y[i];
      if (rate == 0.0) continue;
      for (int i : c.reactants) dy[i] -= rate;
      for (int i : c.products) dy[i] += rate;
    }
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

class Stepper {
 public:
  Stepper(const Compiled& sys, const IntegratorOptions& opts) : sys_(sys), opts_(opts) {
    const size_t n = sys.species.size();
    for (auto* v : {&k1_, &k2_, &k3_, &k4_, &k5_, &k6_, &k7_, &tmp_, &ynew_}) v->assign(n, 0.0);
  }

  /// Advances y from t to t_target exactly.
  void advance(std::vector<double>& y, double& t, double t_target, double& h) {
    const size_t n = y.size();
    if (t_target <= t) return;
    sys_.rhs(y, k1_);
    long steps = 0;
    while (t < t_target) {
      if (++steps > opts_.max_steps_per_segment)
        throw NumericalError("step limit exceeded near t = " + fmt(t) + " s");
      const double remaining = t_target - t;
      bool last = h >= remaining;
      const double hs = last ? remaining : h;

      stage(y, hs, {a21}, {&k1_}, k2_);
      stage(y, hs, {a31, a32}, {&k1_, &k2_}, k3_);
      stage(y, hs, {a41, a42, a43}, {&k1_, &k2_, &k3_}, k4_);
      stage(y, hs, {a51, a52, a53, a54}, {&k1_, &k2_, &k3_, &k4_}, k5_);
      stage(y, hs, {a61, a62, a63, a64, a65}, {&k1_, &k2_, &k3_, &k4_, &k5_}, k6_);
      for (size_t i = 0; i < n; ++i)
        ynew_[i] = y[i] + hs * (b1 * k1_[i] + b3 * k3_[i] + b4 * k4_[i] + b5 * k5_[i] + b6 * k6_[i]);
      sys_.rhs(ynew_, k7_);

      double err = 0.0;
      bool negative = false;
      for (size_t i = 0; i < n; ++i) {
        const double e = hs * (e1 * k1_[i] + e3 * k3_[i] + e4 * k4_[i] + e5 * k5_[i] + e6 * k6_[i] + e7 * k7_[i]);
        const double scale = opts_.atol + opts_.rtol * std::max(std::abs(y[i]), std::abs(ynew_[i]));
        err = std::max(err, std::abs(e) / scale);
        if (ynew_[i] < -opts_.atol) negative = true;
      }
      if (!std::isfinite(err)) err = std::numeric_limits<double>::infinity();

      if (err <= 1.0 && !negative) {
        t = last ? t_target : t + hs;
        // Values in [-atol, 0) stay in the state: clipping every step would
        // leak mass. Snapshots clip instead.
        std::swap(y, ynew_);
        std::swap(k1_, k7_);
        const double grow = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        // A step truncated to land on t_target says nothing about the natural size.
        if (!last || hs == h) h = hs * grow;
      } else {
        const double shrink = negative && err <= 1.0 ? 0.5 : std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
        h = hs * shrink;
      }
      if (h < 1e-14 * std::max(1.0, std::abs(t)))
        throw NumericalError("step size underflow near t = " + fmt(t) + " s (stiff system?)");
    }
  }

 private:
  template <size_t N>
  void stage(const std::vector<double>& y, double h, const double (&a)[N],
             const std::vector<double>* const (&ks)[N], std::vector<double>& out) {
    for (size_t i = 0; i < y.size(); ++i) {
      double acc = 0.0;
      for (size_t j = 0; j < N; ++j) acc += a[j] * (*ks[j])[i];
      tmp_[i] = y[i] + h * acc;
    }
    sys_.rhs(tmp_, out);
  }

  const Compiled& sys_;
  const IntegratorOptions& opts_;
  std::vector<double> k1_, k2_, k3_, k4_, k5_, k6_, k7_, tmp_, ynew_;
};

}  // namespace

// ---------------------------------------------------------------------------

std::map<std::string, double> derivatives(const SimState& s, const ReactionNetwork& net) {
  Compiled sys(net);
  std::vector<double> y(sys.species.size()), dy(y.size());
  for (size_t i = 0; i < y.size(); ++i) {
    auto it = s.conc.find(sys.species[i]);
    if (it == s.conc.end()) throw ValidationError("species missing from state: " + sys.species[i]);
    y[i] = it->second;
  }
  sys.rhs(y, dy);
  std::map<std::string, double> out;
  for (size_t i = 0; i < y.size(); ++i) out[sys.species[i]] = dy[i];
  return out;
}

SimState apply_injection(const SimState& s, const InjectionEvent& event, double efficiency) {
  if (!(event.volume_uL > 0)) throw ValidationError("injection volume must be positive");
  if (!(s.volume_uL > 0)) throw ValidationError("state volume must be positive");
  SimState out = s;
  const double v_new = s.volume_uL + event.volume_uL;
  const double scale = s.volume_uL / v_new;
  for (auto& [name, c] : out.conc) c *= scale;
  out.conc[event.species] += efficiency * event.stock_conc_nM * 1e-9 * event.volume_uL / v_new;
  out.volume_uL = v_new;
  return out;
}

int Trace::column(const std::string& name) const {
  auto it = std::find(species.begin(), species.end(), name);
  return it == species.end() ? -1 : static_cast<int>(it - species.begin());
}

SimState Trace::state(size_t i) const {
  SimState s;
  s.time_s = times.at(i);
  s.volume_uL = volumes_uL.at(i);
  for (size_t j = 0; j < species.size(); ++j) s.conc[species[j]] = conc[i][j];
  return s;
}

SimState initial_state(const ReactionNetwork& net, const InjectionSchedule& schedule) {
  SimState s;
  s.volume_uL = schedule.initial_volume_uL;
  for (const auto& sp : net.species()) s.conc[sp.name] = 0.0;
  for (const auto& [name, nM] : schedule.initial_nM) s.conc[name] = nM * 1e-9;
  return s;
}

Trace integrate(const ReactionNetwork& net, const InjectionSchedule& schedule, double t_end_s,
                double output_dt_s, const IntegratorOptions& opts) {
  if (!(output_dt_s > 0)) throw ValidationError("output_dt must be positive");
  if (t_end_s < schedule.last_event_time())
    throw ValidationError("t_end (" + fmt(t_end_s) + " s) precedes the last event");
  std::vector<double> grid;
  for (long k = 1;; ++k) {
    const double t = static_cast<double>(k) * output_dt_s;
    if (t >= t_end_s) break;
    grid.push_back(t);
  }
  grid.push_back(t_end_s);
  return integrate_at(net, schedule, grid, opts);
}

Trace integrate_at(const ReactionNetwork& net, const InjectionSchedule& schedule,
                   const std::vector<double>& output_times, const IntegratorOptions& opts) {
  schedule.validate();
  if (!(opts.rtol > 0) || !(opts.atol > 0)) throw ValidationError("tolerances must be positive");
  for (size_t i = 0; i < output_times.size(); ++i)
    if (output_times[i] < 0 || (i && output_times[i] <= output_times[i - 1]))
      throw ValidationError("output times must be non-negative and strictly increasing");
  const double t_end_s = std::max(output_times.empty() ? 0.0 : output_times.back(), schedule.last_event_time());

  Compiled sys(net);
  // Fixed column order: network species, then unknown names in order of appearance.
  for (const auto& [name, c] : schedule.initial_nM) sys.add(name);
  for (const auto& e : schedule.events) sys.add(e.species);

  std::vector<double> y(sys.species.size(), 0.0);
  for (const auto& [name, nM] : schedule.initial_nM) y[sys.index.at(name)] = nM * 1e-9;
  double volume = schedule.initial_volume_uL;

  Trace tr;
  tr.species = sys.species;
  auto snapshot = [&](double t) {
    std::vector<double> row(y.size());
    std::transform(y.begin(), y.end(), row.begin(), [](double c) { return std::max(c, 0.0); });
    if (!tr.times.empty() && tr.times.back() == t) {
      tr.conc.back() = std::move(row);
      tr.volumes_uL.back() = volume;
      return;
    }
    tr.times.push_back(t);
    tr.conc.push_back(std::move(row));
    tr.volumes_uL.push_back(volume);
  };
  auto as_state = [&](double t) {
    SimState s;
    s.time_s = t;
    s.volume_uL = volume;
    for (size_t j = 0; j < y.size(); ++j) s.conc[sys.species[j]] = y[j];
    return s;
  };

  Stepper stepper(sys, opts);
  double t = 0.0, h = std::min(1e-3, std::max(t_end_s, 1e-9));
  size_t next_out = 0, next_event = 0;
  snapshot(0.0);
  if (!output_times.empty() && output_times[0] == 0.0) ++next_out;

  while (true) {
    const bool have_out = next_out < output_times.size();
    const double t_grid = have_out ? output_times[next_out] : t_end_s;
    const bool have_event = next_event < schedule.events.size();
    const double t_event = have_event ? schedule.events[next_event].time_s : t_end_s;
    double target = std::min({t_grid, t_event, t_end_s});
    stepper.advance(y, t, target, h);
    if (have_out && t_grid == t) ++next_out;
    if (have_event && t_event == t) {
      for (auto& c : y) c = std::max(c, 0.0);
      const SimState before = as_state(t);
      while (next_event < schedule.events.size() && schedule.events[next_event].time_s == t) {
        const auto& e = schedule.events[next_event];
        const double scale = volume / (volume + e.volume_uL);
        for (auto& c : y) c *= scale;
        volume += e.volume_uL;
        y[sys.index.at(e.species)] += schedule.efficiency(e.cycle) * e.stock_conc_nM * 1e-9 * e.volume_uL / volume;
        tr.events.push_back({next_event, t, {}, {}});
        ++next_event;
      }
      const SimState after = as_state(t);
      // Events sharing a timestamp record the whole group.
      for (auto it = tr.events.rbegin(); it != tr.events.rend() && it->time_s == t; ++it) {
        it->before = before;
        it->after = after;
      }
      h = std::min(h, 1e-3);
    }
    if ((have_out && t == t_grid) || (have_event && t == t_event) || t == t_end_s) snapshot(t);
    if (t >= t_end_s && next_event >= schedule.events.size()) break;
  }
  return tr;
}

// ---------------------------------------------------------------------------

Normalization Normalization::parse(const std::string& text) {
  Normalization n;
  if (text == "none") return n;
  if (text == "minmax") {
    n.mode = Mode::minmax;
    return n;
  }
  std::string num;
  if (text.rfind("fixed:", 0) == 0) num = text.substr(6);
  else if (text.rfind("fixed(", 0) == 0 && text.back() == ')') num = text.substr(6, text.size() - 7);
  else throw ValidationError("unknown normalization: " + text);
  try {
    size_t used = 0;
    n.max_nM = std::stod(num, &used);
    if (used != num.size()) throw std::invalid_argument(num);
  } catch (const std::exception&) {
    throw ValidationError("bad fixed normalization value: " + num);
  }
  if (!(n.max_nM > 0)) throw ValidationError("fixed normalization maximum must be positive");
  n.mode = Mode::fixed;
  return n;
}

std::string Normalization::to_string() const {
  switch (mode) {
    case Mode::none: return "none";
    case Mode::minmax: return "minmax";
    case Mode::fixed: return "fixed:" + fmt(max_nM);
  }
  return "none";
}

std::vector<std::string> dye_species(const ReactionNetwork& net) {
  std::vector<std::string> out;
  for (const auto& s : net.species())
    if (s.census.count(kDyeStrand) && !s.census.count(kQuencherStrand)) out.push_back(s.name);
  return out;
}

std::vector<double> raw_signal(const Trace& trace, const ReactionNetwork& net) {
  std::vector<int> cols;
  for (const auto& name : dye_species(net))
    if (int c = trace.column(name); c >= 0) cols.push_back(c);
  std::vector<double> out(trace.size(), 0.0);
  for (size_t i = 0; i < trace.size(); ++i)
    for (int c : cols) out[i] += trace.conc[i][c] * 1e9 * net.census(trace.species[c]).at(kDyeStrand);
  return out;
}

std::vector<double> fluorescence(const Trace& trace, const ReactionNetwork& net, const Normalization& norm) {
  if (trace.size() == 0) throw ValidationError("empty trace");
  auto raw = raw_signal(trace, net);
  switch (norm.mode) {
    case Normalization::Mode::none: break;
    case Normalization::Mode::fixed:
      if (!(norm.max_nM > 0)) throw ValidationError("fixed normalization maximum must be positive");
      for (auto& v : raw) v /= norm.max_nM;
      break;
    case Normalization::Mode::minmax: {
      const auto [lo, hi] = std::minmax_element(raw.begin(), raw.end());
      const double a = *lo, span = *hi - *lo;
      for (auto& v : raw) v = span > 0 ? (v - a) / span : 0.0;
      break;
    }
  }
  return raw;
}

}  // namespace hsgate
