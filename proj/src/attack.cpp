#include "koopguard/attack.hpp"

#include <algorithm>
#include <string>

#include "koopguard/errors.hpp"

namespace koopguard {

const char* attack_kind_name(AttackKind k)
{
    switch (k) {
    case AttackKind::None: return "none";
    case AttackKind::Actuation: return "actuation";
    case AttackKind::Sensor: return "sensor";
    }
    return "?";
}

AttackKind parse_attack_kind(const std::string& s)
{
    if (s == "none") return AttackKind::None;
    if (s == "actuation") return AttackKind::Actuation;
    if (s == "sensor") return AttackKind::Sensor;
    throw ConfigError("unknown attack kind '" + s + "'");
}

void AttackScenario::validate() const
{
    if (kind == AttackKind::None)
        return;
    if (!(t_start < t_end))
        throw ConfigError("attack window needs t_start < t_end");
    if (const auto* s = std::get_if<Samples>(&signal)) {
        for (size_t i = 1; i < s->points.size(); ++i)
            if (!(s->points[i].first > s->points[i - 1].first))
                throw ConfigError("attack sample times must be strictly increasing");
    }
}

double attack_signal(double t, const AttackScenario& sc)
{
    if (!sc.active(t))
        return 0.0;
    if (const auto* c = std::get_if<Constant>(&sc.signal))
        return c->value;
    if (const auto* r = std::get_if<Ramp>(&sc.signal)) {
        double a = (t - sc.t_start) / (sc.t_end - sc.t_start);
        return r->start + a * (r->end - r->start);
    }
    const auto& pts = std::get<Samples>(sc.signal).points;
    auto it = std::upper_bound(pts.begin(), pts.end(), t,
                               [](double x, const auto& p) { return x < p.first; });
    if (it == pts.begin())
        return 0.0;
    return std::prev(it)->second;
}

Actuation apply_actuation(double i_cmd, double t, const AttackScenario& sc, double i_limit)
{
    double i = i_cmd;
    if (sc.kind == AttackKind::Actuation && sc.active(t)) {
        double d = attack_signal(t, sc);
        i = sc.mode == ActuationMode::Override ? d : i_cmd + d;
    }
    if (i > i_limit)
        return {i_limit, true};
    if (i < -i_limit)
        return {-i_limit, true};
    return {i, false};
}

double apply_sensor(double v_true, double t, const AttackScenario& sc)
{
    if (sc.kind != AttackKind::Sensor)
        return v_true;
    return v_true + attack_signal(t, sc);
}

}  // namespace koopguard
