#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace koopguard {

enum class AttackKind { None, Actuation, Sensor };

const char* attack_kind_name(AttackKind k);
AttackKind parse_attack_kind(const std::string& s);

struct Constant {
    double value;
};

// Linear from start (at t_start) to end (at t_end).
struct Ramp {
    double start;
    double end;
};

// Zero-order hold through (t, value) knots; 0 before the first knot.
struct Samples {
    std::vector<std::pair<double, double>> points;
};

using Signal = std::variant<Constant, Ramp, Samples>;

enum class ActuationMode { Additive, Override };

struct AttackScenario {
    AttackKind kind = AttackKind::None;
    double t_start = 700.0;
    double t_end = 1600.0;
    Signal signal = Constant{0.0};
    ActuationMode mode = ActuationMode::Additive;

    bool active(double t) const { return kind != AttackKind::None && t >= t_start && t < t_end; }
    void validate() const;
};

double attack_signal(double t, const AttackScenario& sc);

struct Actuation {
    double current;
    bool saturated;
};

Actuation apply_actuation(double i_cmd, double t, const AttackScenario& sc, double i_limit = 25.0);

double apply_sensor(double v_true, double t, const AttackScenario& sc);

}  // namespace koopguard
