#include "rpfcone/potential.hpp"

#include <cmath>

#include "rpfcone/cheb.hpp"
#include "rpfcone/errors.hpp"

namespace rpfcone {

Potential Potential::zero() { return Potential(); }

Potential Potential::constant(double c) {
    Potential u;
    u.kind_ = Kind::Constant;
    u.c0_ = c;
    return u;
}

Potential Potential::log_x(double coef) {
    Potential u;
    u.kind_ = Kind::LogX;
    u.log_coef_ = coef;
    return u;
}

Potential Potential::coordinate() {
    Potential u;
    u.kind_ = Kind::Coordinate;
    return u;
}

Potential Potential::first_symbol(std::vector<double> symbol_values) {
    Potential u;
    u.kind_ = Kind::FirstSymbol;
    u.symbol_values_ = std::move(symbol_values);
    return u;
}

Potential Potential::nodal(DiscreteFunction table) {
    if (!table.is_real()) throw ValidationError("potentials must be real-valued");
    Potential u;
    u.kind_ = Kind::Nodal;
    u.table_ = std::move(table);
    return u;
}

double Potential::eval(double x) const {
    switch (kind_) {
        case Kind::Zero: return 0.0;
        case Kind::Constant: return c0_;
        case Kind::LogX:
            if (!(x > 0.0)) throw DomainError("log potential needs x > 0");
            return log_coef_ * std::log(x);
        case Kind::Coordinate: return x;
        case Kind::Nodal: return evaluate(table_, x).real();
        case Kind::FirstSymbol:
            throw DomainError("symbol potential has no point evaluation");
    }
    throw DomainError("unknown potential kind");
}

std::vector<double> Potential::values_on(const std::shared_ptr<const Grid>& g) const {
    std::vector<double> out(g->size(), 0.0);
    if (kind_ == Kind::FirstSymbol) {
        if (g->kind == GridKind::IntervalCollocation)
            throw DomainError("symbol potential needs a symbolic grid");
        for (std::size_t i = 0; i < g->size(); ++i) {
            int s = g->words[i][0];
            if (s < 0 || s >= static_cast<int>(symbol_values_.size()))
                throw ValidationError("symbol potential missing a symbol value");
            out[i] = symbol_values_[s];
        }
        return out;
    }
    if (kind_ == Kind::Nodal) {
        if (table_.grid.get() == g.get() || table_.grid->size() == g->size()) {
            for (std::size_t i = 0; i < g->size(); ++i) out[i] = table_.values[i].real();
            return out;
        }
        throw ValidationError("nodal potential grid mismatch");
    }
    if (g->kind != GridKind::IntervalCollocation) {
        if (kind_ == Kind::Zero || kind_ == Kind::Constant) {
            for (double& v : out) v = c0_;
            return out;
        }
        throw DomainError("coordinate/log potentials need an interval grid");
    }
    for (std::size_t i = 0; i < g->size(); ++i) out[i] = eval(g->xs[i]);
    return out;
}

double Potential::sup_on(const std::shared_ptr<const Grid>& g) const {
    double s = 0.0;
    for (double v : values_on(g)) s = std::max(s, std::abs(v));
    return s;
}

double Potential::log_coef() const { return kind_ == Kind::LogX ? log_coef_ : 0.0; }

std::array<double, 3> Potential::regular_jet(const std::shared_ptr<const Grid>& g) const {
    (void)g;
    switch (kind_) {
        case Kind::Zero:
        case Kind::LogX: return {0.0, 0.0, 0.0};
        case Kind::Constant: return {c0_, 0.0, 0.0};
        case Kind::Coordinate: return {0.0, 1.0, 0.0};
        case Kind::Nodal: {
            const Grid& gg = *table_.grid;
            if (gg.kind != GridKind::IntervalCollocation)
                throw DomainError("jet needs an interval grid");
            auto rows = cheb::derivative_rows(static_cast<int>(gg.size()), 0.0, 2);
            std::array<double, 3> jet = {0.0, 0.0, 0.0};
            for (int m = 0; m <= 2; ++m)
                for (std::size_t i = 0; i < gg.size(); ++i)
                    jet[m] += rows[m][i] * table_.values[i].real();
            return jet;
        }
        case Kind::FirstSymbol:
            throw DomainError("symbol potential has no interval jet");
    }
    throw DomainError("unknown potential kind");
}

}  // namespace rpfcone
