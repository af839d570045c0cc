#include "grafcet/invariants.hpp"

#include <algorithm>

namespace grafcet {

IncidenceMatrix incidence(const PartialNet& net)
{
    IncidenceMatrix n;
    for (std::size_t s = 0; s < net.step_count(); ++s)
        n.steps.push_back(net.step_id(s));
    for (std::size_t t = 0; t < net.transition_count(); ++t)
        n.transitions.push_back(net.transition_id(t));
    n.entries.assign(net.step_count(), std::vector<int>(net.transition_count(), 0));
    for (std::size_t t = 0; t < net.transition_count(); ++t) {
        for (auto s : net.upstream(t))
            n.entries[s][t] -= 1;
        for (auto s : net.downstream(t))
            n.entries[s][t] += 1;
    }
    return n;
}

namespace {

struct Row {
    IntVector coef;  // remaining columns of A
    IntVector id;    // combination of unknowns
    StepSet support;
};

Integer abs_value(const Integer& v)
{
    return v < 0 ? Integer(-v) : v;
}

void normalize(Row& r)
{
    Integer g = 0;
    for (const auto* part : {&r.coef, &r.id})
        for (const auto& v : *part)
            if (v != 0)
                g = g == 0 ? abs_value(v) : boost::multiprecision::gcd(g, abs_value(v));
    if (g > 1) {
        for (auto* part : {&r.coef, &r.id})
            for (auto& v : *part)
                v /= g;
    }
}

bool strict_subset(const StepSet& a, const StepSet& b)
{
    return a != b && a.is_subset_of(b);
}

// Drops rows whose support strictly contains another row's support, and
// exact duplicates.
void prune(std::vector<Row>& rows)
{
    std::vector<bool> drop(rows.size(), false);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (drop[i])
            continue;
        for (std::size_t j = 0; j < rows.size(); ++j) {
            if (i == j || drop[j])
                continue;
            if (strict_subset(rows[j].support, rows[i].support)) {
                drop[i] = true;
                break;
            }
            if (j > i && rows[j].support == rows[i].support && rows[j].id == rows[i].id && rows[j].coef == rows[i].coef)
                drop[j] = true;
        }
    }
    std::vector<Row> kept;
    kept.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (!drop[i])
            kept.push_back(std::move(rows[i]));
    rows = std::move(kept);
}

bool support_less(const IntVector& a, const IntVector& b)
{
    std::vector<std::size_t> sa, sb;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0)
            sa.push_back(i);
    for (std::size_t i = 0; i < b.size(); ++i)
        if (b[i] != 0)
            sb.push_back(i);
    if (sa != sb)
        return sa < sb;
    return a < b;
}

}  // namespace

SemiflowResult minimal_semiflows(const std::vector<std::vector<int>>& a, std::size_t unknowns, const InvariantOptions& opts)
{
    SemiflowResult result;
    const std::size_t cols = a.empty() ? 0 : a.front().size();

    std::vector<Row> rows;
    rows.reserve(unknowns);
    for (std::size_t i = 0; i < unknowns; ++i) {
        Row r;
        r.coef.assign(cols, 0);
        for (std::size_t j = 0; j < cols; ++j)
            r.coef[j] = a[i][j];
        r.id.assign(unknowns, 0);
        r.id[i] = 1;
        r.support = StepSet(unknowns);
        r.support.set(i);
        rows.push_back(std::move(r));
    }

    for (std::size_t j = 0; j < cols; ++j) {
        std::vector<Row> next;
        std::vector<std::size_t> pos, neg;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].coef[j] > 0)
                pos.push_back(i);
            else if (rows[i].coef[j] < 0)
                neg.push_back(i);
            else
                next.push_back(rows[i]);
        }
        for (auto p : pos) {
            for (auto q : neg) {
                const Row& rp = rows[p];
                const Row& rq = rows[q];
                Integer wp = abs_value(rq.coef[j]);
                Integer wq = rp.coef[j];
                Row r;
                r.coef.resize(cols);
                r.id.resize(unknowns);
                for (std::size_t k = 0; k < cols; ++k)
                    r.coef[k] = wp * rp.coef[k] + wq * rq.coef[k];
                for (std::size_t k = 0; k < unknowns; ++k)
                    r.id[k] = wp * rp.id[k] + wq * rq.id[k];
                r.support = rp.support | rq.support;
                normalize(r);
                next.push_back(std::move(r));
                if (next.size() > opts.max_rows * 4) {
                    result.complete = false;
                    return result;
                }
            }
        }
        prune(next);
        if (next.size() > opts.max_rows) {
            result.complete = false;
            return result;
        }
        rows = std::move(next);
    }

    for (auto& r : rows) {
        IntVector v = r.id;
        Integer g = 0;
        for (const auto& x : v)
            if (x != 0)
                g = g == 0 ? abs_value(x) : boost::multiprecision::gcd(g, abs_value(x));
        if (g > 1)
            for (auto& x : v)
                x /= g;
        result.vectors.push_back(std::move(v));
    }
    // Keep minimal supports only; equal minimal supports are proportional.
    std::sort(result.vectors.begin(), result.vectors.end(), support_less);
    result.vectors.erase(std::unique(result.vectors.begin(), result.vectors.end()), result.vectors.end());
    std::vector<IntVector> minimal;
    for (const auto& v : result.vectors) {
        bool dominated = false;
        for (const auto& w : result.vectors) {
            if (&v == &w)
                continue;
            bool subset = true, equal = true;
            for (std::size_t k = 0; k < v.size(); ++k) {
                bool in_v = v[k] != 0, in_w = w[k] != 0;
                if (in_w && !in_v)
                    subset = false;
                if (in_w != in_v)
                    equal = false;
            }
            if (subset && !equal) {
                dominated = true;
                break;
            }
        }
        if (!dominated)
            minimal.push_back(v);
    }
    result.vectors = std::move(minimal);
    return result;
}

SemiflowResult s_invariants(const IncidenceMatrix& n, const InvariantOptions& opts)
{
    return minimal_semiflows(n.entries, n.rows(), opts);
}

SemiflowResult t_invariants(const IncidenceMatrix& n, const InvariantOptions& opts)
{
    std::vector<std::vector<int>> transposed(n.cols(), std::vector<int>(n.rows(), 0));
    for (std::size_t s = 0; s < n.rows(); ++s)
        for (std::size_t t = 0; t < n.cols(); ++t)
            transposed[t][s] = n.entries[s][t];
    return minimal_semiflows(transposed, n.cols(), opts);
}

Boundedness classify_boundedness(const SemiflowResult& s_inv, std::size_t step_count)
{
    Boundedness b;
    b.step_bound.assign(step_count, std::nullopt);
    if (s_inv.complete) {
        for (const auto& y : s_inv.vectors) {
            for (std::size_t s = 0; s < step_count; ++s) {
                if (y[s] <= 0)
                    continue;
                if (!b.step_bound[s] || *b.step_bound[s] < y[s])
                    b.step_bound[s] = y[s];
            }
        }
    }
    for (std::size_t s = 0; s < step_count; ++s)
        if (!b.step_bound[s])
            b.uncovered.push_back(s);
    b.covered = s_inv.complete && b.uncovered.empty();
    if (b.covered) {
        Integer n = 0;
        for (const auto& y : s_inv.vectors)
            for (const auto& v : y)
                n = std::max(n, v);
        b.bound = n;
    }
    return b;
}

std::vector<bool> InvariantSet::transitions_on_loops() const
{
    std::vector<bool> out(matrix.cols(), false);
    for (const auto& x : t.vectors)
        for (std::size_t i = 0; i < x.size(); ++i)
            if (x[i] > 0)
                out[i] = true;
    return out;
}

InvariantSet compute_invariants(const PartialNet& net, const InvariantOptions& opts)
{
    InvariantSet inv;
    inv.matrix = incidence(net);
    inv.s = s_invariants(inv.matrix, opts);
    inv.t = t_invariants(inv.matrix, opts);
    inv.boundedness = classify_boundedness(inv.s, net.step_count());
    return inv;
}

bool verifies_s_invariant(const IncidenceMatrix& n, const IntVector& y)
{
    if (y.size() != n.rows())
        return false;
    for (std::size_t t = 0; t < n.cols(); ++t) {
        Integer sum = 0;
        for (std::size_t s = 0; s < n.rows(); ++s)
            sum += y[s] * n.entries[s][t];
        if (sum != 0)
            return false;
    }
    return std::all_of(y.begin(), y.end(), [](const Integer& v) { return v >= 0; }) &&
           std::any_of(y.begin(), y.end(), [](const Integer& v) { return v > 0; });
}

bool verifies_t_invariant(const IncidenceMatrix& n, const IntVector& x)
{
    if (x.size() != n.cols())
        return false;
    for (std::size_t s = 0; s < n.rows(); ++s) {
        Integer sum = 0;
        for (std::size_t t = 0; t < n.cols(); ++t)
            sum += x[t] * n.entries[s][t];
        if (sum != 0)
            return false;
    }
    return std::all_of(x.begin(), x.end(), [](const Integer& v) { return v >= 0; }) &&
           std::any_of(x.begin(), x.end(), [](const Integer& v) { return v > 0; });
}

}  // namespace grafcet
