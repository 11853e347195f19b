#ifndef CXODE_FLOW_HPP
#define CXODE_FLOW_HPP

#include <functional>
#include <string>
#include <utility>

#include "cxode/rk.hpp"

namespace cxode {

// Type-erased one-step method of a declared order. Calling it advances the
// state by a (possibly complex) step tau.
class Flow {
  public:
    using StepFn = std::function<StepResult(const OdeProblem&, Complex, const StateVec&, Complex)>;

    Flow() = default;
    Flow(std::string name, int order, StepFn fn)
        : name_(std::move(name)), order_(order), fn_(std::move(fn)) {}

    StepResult operator()(const OdeProblem& prob, Complex t, const StateVec& y,
                          Complex tau) const {
        return fn_(prob, t, y, tau);
    }

    int order() const { return order_; }
    const std::string& name() const { return name_; }
    bool valid() const { return static_cast<bool>(fn_); }

  private:
    std::string name_;
    int order_ = 0;
    StepFn fn_;
};

inline Flow make_rk_flow(const ButcherTableau& tab) {
    return Flow(tab.name, tab.order,
                [tab](const OdeProblem& prob, Complex t, const StateVec& y, Complex tau) {
                    return rk_step(tab, prob, t, y, tau);
                });
}

}  // namespace cxode

#endif
