#pragma once

// Shared inequality-report shape.  The claim is always lhs <= rhs, so
// slack = rhs - lhs is nonnegative exactly when the bound holds; pass applies
// the stated tolerance.  Signed slacks keep near-equality cases auditable.

#include <string>
#include <utility>

namespace ensvol {

struct BoundReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;        // rhs - lhs
    std::string units = "nats";
    bool pass = true;
    std::string warning;       // nonempty when a value was clipped or a precondition is marginal

    static BoundReport make(std::string name, double lhs, double rhs, std::string units,
                            double tolerance) {
        BoundReport r;
        r.name = std::move(name);
        r.lhs = lhs;
        r.rhs = rhs;
        r.slack = rhs - lhs;
        r.units = std::move(units);
        r.pass = r.slack >= -tolerance;
        return r;
    }
};

} // namespace ensvol
