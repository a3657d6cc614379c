#include "doctest.h"

#include "cbm/model.hpp"
#include "test_util.hpp"

using namespace cbm;

TEST_SUITE("model") {

TEST_CASE("wind parameters validate") {
    const ModelParams pr = test_util::wind();
    CHECK_NOTHROW(validate(pr));
}

TEST_CASE("validation rejects out-of-domain fields") {
    ModelParams pr = test_util::wind();
    pr.p = 0.0;
    CHECK_THROWS_AS(validate(pr), DomainError);
    try {
        validate(pr);
    } catch (const DomainError& e) {
        CHECK(e.field == "p");
    }

    pr = test_util::wind();
    pr.tau = -1.0;
    CHECK_THROWS_AS(validate(pr), DomainError);

    pr = test_util::wind();
    pr.c_cm = 0.0;
    CHECK_THROWS_AS(validate(pr), DomainError);

    pr = test_util::wind();
    pr.lambda = -0.5;
    CHECK_THROWS_AS(validate(pr), DomainError);
}

TEST_CASE("validation is idempotent") {
    const ModelParams pr = test_util::wind();
    const ModelParams once = validate(pr);
    const ModelParams twice = validate(once);
    CHECK(once.mu1 == twice.mu1);
    CHECK(once.c_pm_uso == twice.c_pm_uso);
}

TEST_CASE("policies are value-comparable") {
    CHECK(policy_control_limit(0.112) == policy_control_limit(0.112));
    CHECK(policy_control_limit(0.0, true) == policy_control_limit(0.0, true));
    CHECK_FALSE(policy_control_limit(0.1) == policy_control_limit(0.2));
    CHECK_FALSE(policy_never() == policy_only_so());
}

TEST_CASE("control-limit threshold is range-checked against tau") {
    const ModelParams pr = test_util::wind();
    CHECK_NOTHROW(check_policy(pr, policy_control_limit(0.0)));
    CHECK_NOTHROW(check_policy(pr, policy_control_limit(pr.tau)));
    CHECK_THROWS_AS(check_policy(pr, policy_control_limit(pr.tau + 0.1)), DomainError);
    CHECK_THROWS_AS(policy_control_limit(-0.2), DomainError);
}

TEST_CASE("cost breakdown total is the component sum") {
    const CostBreakdown cb = CostBreakdown::of(1.5, 2.5, 3.25);
    CHECK(cb.total == doctest::Approx(7.25).epsilon(1e-12));
}

}  // TEST_SUITE
