#include "koopguard/monitor.hpp"

#include <spdlog/spdlog.h>

#include "koopguard/errors.hpp"
#include "koopguard/isolator.hpp"

namespace koopguard {

Monitor::Monitor(const MonitorConfig& cfg) : cfg_(cfg), next_start_(cfg.window.W)
{
    cfg_.window.validate();
    if (cfg_.window.W_tilde < 2)
        throw ConfigError("monitor: W_tilde must be at least 2 for the window to advance");
    if (!(cfg_.input_scale > 0.0))
        throw ConfigError("monitor: input_scale must be positive");
    if (!(cfg_.threshold > 0.0))
        throw ConfigError("monitor: detection threshold must be positive");
    if (!(cfg_.epsilon > 0.0))
        throw ConfigError("monitor: isolation epsilon must be positive");
    det_.threshold = cfg_.threshold;
}

void Monitor::open_window(double t)
{
    const auto& w = cfg_.window;
    const int m = w.m();
    Mat y(w.q, m), u(w.p, m);
    const long off = static_cast<long>(ys_.size()) - m;
    for (int j = 0; j < m; ++j) {
        y.col(j) = ys_[off + j];
        u.col(j) = us_[off + j];
    }
    Active a;
    a.u_ref = u.col(m - 1);
    u = (u.colwise() - a.u_ref) / cfg_.input_scale;

    DelayMatrices d = embed(y, u, w.tau);
    a.model = fit(d, cfg_.rcond);
    a.d = d.Ys.col(d.Ys.cols() - 1);
    a.t_start = t;
    a.resid = Vec::Zero(w.q * w.W_tilde);
    active_.push_back(std::move(a));
}

MonitorOutput Monitor::push(double t, const Vec& y, const Vec& u)
{
    const auto& w = cfg_.window;
    if (y.size() != w.q || u.size() != w.p)
        throw ArgumentError("monitor: sample dimension mismatch");

    if (n_ == next_start_) {
        open_window(t);
        next_start_ += w.W_tilde - 1;
    }

    MonitorOutput out;
    Vec newest_pred;
    const int yo = y_offset(w.tau, w.q, w.p);
    for (auto& a : active_) {
        // the input driving this step was commanded at the previous sample
        Vec du = (us_.back() - a.u_ref) / cfg_.input_scale;
        a.d = advance(a.model, a.d, du);
        Vec yhat = a.d.segment(yo, w.q);
        a.resid.segment(a.steps * w.q, w.q) = y - yhat;
        ++a.steps;
        newest_pred = yhat;
    }

    if (!active_.empty()) {
        out.y_pred = newest_pred(0);
        double r = residual(y, newest_pred);
        out.r_D = r;
        update_flag(det_, r, t);
    }
    out.det_flag = det_.flag ? 1 : 0;

    for (auto& a : active_) {
        double own = a.resid.segment((a.steps - 1) * w.q, w.q).norm();
        if (det_.flag && own > cfg_.threshold)
            a.hot = true;
    }

    for (auto it = active_.begin(); it != active_.end();) {
        if (it->steps < w.W_tilde) {
            ++it;
            continue;
        }
        if (it->hot && det_.flag) {
            try {
                CMat G = build_mode_regressor(it->model, w.W_tilde, cfg_.eig_floor);
                IsolationResult ir = isolation_residual(G, it->resid, cfg_.rcond);
                iso_held_ = classify(ir.r_I, cfg_.epsilon);
                out.r_I = ir.r_I;
                reports_.push_back({it->t_start, t, ir.r_I, iso_held_});
            } catch (const IsolationUnavailable& e) {
                spdlog::debug("t={}: {}", t, e.what());
            }
        }
        it = active_.erase(it);
    }
    if (!det_.flag)
        iso_held_ = 0;
    out.iso_flag = iso_held_;

    ys_.push_back(y);
    us_.push_back(u);
    while (static_cast<int>(ys_.size()) > w.m()) {
        ys_.pop_front();
        us_.pop_front();
    }
    ++n_;
    return out;
}

MonitorOutput Monitor::push(double t, double y, double u)
{
    return push(t, Vec::Constant(1, y), Vec::Constant(1, u));
}

}  // namespace koopguard
