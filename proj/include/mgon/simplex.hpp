#ifndef MGON_SIMPLEX_HPP
#define MGON_SIMPLEX_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

namespace mgon {

struct LpResult {
    bool optimal = false;
    double objective = 0;
    std::vector<double> x;
};

// Dense two-phase simplex for
//     min c.x   s.t.   A_ub x <= b_ub,   A_eq x = b_eq,   x >= 0.
// Phase 1 starts from an all-artificial basis and minimizes infeasibility;
// Bland's rule prevents cycling. Suitable for the small offline problems in
// this project, not for large-scale optimization.
class SimplexSolver {
public:
    LpResult solve(const std::vector<double>& c, const std::vector<std::vector<double>>& a_ub,
                   const std::vector<double>& b_ub, const std::vector<std::vector<double>>& a_eq,
                   const std::vector<double>& b_eq) {
        int n = (int)c.size();
        int m_ub = (int)a_ub.size(), m_eq = (int)a_eq.size();
        int m = m_ub + m_eq;
        int slack = m_ub, art = m;
        int total = n + slack + art;

        // rows: [A | slack | artificial | b], b made non-negative
        std::vector<std::vector<double>> t(m, std::vector<double>(total + 1, 0.0));
        for (int i = 0; i < m_ub; ++i) {
            for (int j = 0; j < n; ++j) t[i][j] = a_ub[i][j];
            t[i][n + i] = 1.0;
            t[i][total] = b_ub[i];
        }
        for (int i = 0; i < m_eq; ++i) {
            for (int j = 0; j < n; ++j) t[m_ub + i][j] = a_eq[i][j];
            t[m_ub + i][total] = b_eq[i];
        }
        for (int i = 0; i < m; ++i)
            if (t[i][total] < 0)
                for (int j = 0; j <= total; ++j) t[i][j] = -t[i][j];
        std::vector<int> basis(m);
        for (int i = 0; i < m; ++i) {
            t[i][n + slack + i] = 1.0;
            basis[i] = n + slack + i;
        }

        // phase 1: minimize the artificial sum
        std::vector<double> phase1(total, 0.0);
        for (int i = 0; i < art; ++i) phase1[n + slack + i] = 1.0;
        double inf = run(t, basis, phase1, total);
        if (inf > 1e-7) return {};  // infeasible

        // drive any artificial still in the basis out (degenerate rows)
        for (int i = 0; i < m; ++i) {
            if (basis[i] < n + slack) continue;
            int enter = -1;
            for (int j = 0; j < n + slack && enter < 0; ++j)
                if (std::abs(t[i][j]) > 1e-9) enter = j;
            if (enter >= 0)
                pivot(t, basis, i, enter, total);
            // else: the row is redundant; the artificial stays at value 0
        }

        // phase 2 with the real objective (artificials blocked)
        std::vector<double> phase2(total, 0.0);
        for (int j = 0; j < n; ++j) phase2[j] = c[j];
        double obj = run(t, basis, phase2, total, n + slack);

        LpResult r;
        r.optimal = true;
        r.objective = obj;
        r.x.assign(n, 0.0);
        int mloc = (int)t.size();
        for (int i = 0; i < mloc; ++i)
            if (basis[i] < n) r.x[basis[i]] = t[i][total];
        return r;
    }

private:
    static void pivot(std::vector<std::vector<double>>& t, std::vector<int>& basis, int row,
                      int col, int total) {
        double p = t[row][col];
        for (int j = 0; j <= total; ++j) t[row][j] /= p;
        for (size_t i = 0; i < t.size(); ++i) {
            if ((int)i == row || std::abs(t[i][col]) < 1e-12) continue;
            double f = t[i][col];
            for (int j = 0; j <= total; ++j) t[i][j] -= f * t[row][j];
        }
        basis[row] = col;
    }

    // Simplex iterations for the given cost vector; columns >= limit are
    // excluded from entering. Returns the objective value.
    static double run(std::vector<std::vector<double>>& t, std::vector<int>& basis,
                      const std::vector<double>& cost, int total, int limit = -1) {
        int m = (int)t.size();
        if (limit < 0) limit = total;
        for (int iter = 0;; ++iter) {
            if (iter > 100000) throw std::runtime_error("simplex iteration limit");
            // reduced costs: c_j - c_B . B^-1 A_j
            std::vector<double> y(m);
            for (int i = 0; i < m; ++i) y[i] = cost[basis[i]];
            int enter = -1;
            for (int j = 0; j < limit; ++j) {
                double rc = cost[j];
                for (int i = 0; i < m; ++i) rc -= y[i] * t[i][j];
                if (rc < -1e-9) {  // Bland: first improving column
                    enter = j;
                    break;
                }
            }
            if (enter < 0) break;
            int leave = -1;
            double best = 0;
            for (int i = 0; i < m; ++i) {
                if (t[i][enter] <= 1e-9) continue;
                double ratio = t[i][total] / t[i][enter];
                if (leave < 0 || ratio < best - 1e-12 ||
                    (ratio < best + 1e-12 && basis[i] < basis[leave]))
                    leave = i, best = ratio;
            }
            if (leave < 0) throw std::runtime_error("unbounded linear program");
            pivot(t, basis, leave, enter, total);
        }
        double obj = 0;
        for (int i = 0; i < m; ++i) obj += cost[basis[i]] * t[i][total];
        return obj;
    }
};

}  // namespace mgon

#endif
