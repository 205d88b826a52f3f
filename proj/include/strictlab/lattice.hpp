#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace strictlab {

// 2D periodic square lattice. Sites are row-major integers, bonds are
// (site, direction) pairs packed as bond = 2*site + dir with dir 0 = x, 1 = y.
// Every site owns its +x and +y bond, so |sites| = L^2 and |bonds| = 2*L^2.
// For L = 2 the torus has doubled edges; both bonds are kept as distinct ids.
class Lattice {
public:
    enum Dir : int { X = 0, Y = 1 };

    explicit Lattice(int linear_size) : L_(linear_size) {
        if (linear_size < 2)
            throw std::invalid_argument("Lattice: linear size must be >= 2");
    }

    int size() const { return L_; }
    int num_sites() const { return L_ * L_; }
    int num_bonds() const { return 2 * L_ * L_; }

    int site(int x, int y) const { return wrap(y) * L_ + wrap(x); }
    int site_x(int s) const { return s % L_; }
    int site_y(int s) const { return s / L_; }

    int bond(int site_id, int dir) const { return 2 * site_id + dir; }
    int bond_site(int b) const { return b / 2; }
    int bond_dir(int b) const { return b % 2; }

    // The two sites joined by a bond, with periodic wraparound.
    std::array<int, 2> bond_endpoints(int b) const {
        check_bond(b);
        const int s = bond_site(b);
        const int x = site_x(s), y = site_y(s);
        if (bond_dir(b) == X) return {s, site(x + 1, y)};
        return {s, site(x, y + 1)};
    }

    // The 4 bonds incident to a site: its own x- and y-bond plus the x-bond
    // of its left neighbor and the y-bond of its lower neighbor.
    std::array<int, 4> site_bonds(int s) const {
        check_site(s);
        const int x = site_x(s), y = site_y(s);
        return {bond(s, X), bond(s, Y),
                bond(site(x - 1, y), X), bond(site(x, y - 1), Y)};
    }

    // The 4 perpendicular bonds l' sharing an endpoint with l whose free
    // endpoints sit at Euclidean distance sqrt(2) from l's free endpoint.
    // These are exactly the partner bonds of the (r_l - r_l')^2 term.
    std::array<int, 4> lambda_neighbors(int b) const {
        check_bond(b);
        const int s = bond_site(b);
        const int x = site_x(s), y = site_y(s);
        if (bond_dir(b) == X) {
            return {bond(site(x, y), Y), bond(site(x, y - 1), Y),
                    bond(site(x + 1, y), Y), bond(site(x + 1, y - 1), Y)};
        }
        return {bond(site(x, y), X), bond(site(x - 1, y), X),
                bond(site(x, y + 1), X), bond(site(x - 1, y + 1), X)};
    }

    // Visits each unordered lambda pair exactly once: every pair couples an
    // x-bond to a y-bond, so iterating x-bonds covers all 4*L^2 pairs.
    template <typename F>
    void for_each_lambda_pair(F&& f) const {
        for (int s = 0; s < num_sites(); ++s) {
            const int bx = bond(s, X);
            for (int by : lambda_neighbors(bx)) f(bx, by);
        }
    }

private:
    int wrap(int c) const {
        c %= L_;
        return c < 0 ? c + L_ : c;
    }
    void check_site(int s) const {
        if (s < 0 || s >= num_sites())
            throw std::out_of_range("Lattice: site index " + std::to_string(s));
    }
    void check_bond(int b) const {
        if (b < 0 || b >= num_bonds())
            throw std::out_of_range("Lattice: bond index " + std::to_string(b));
    }

    int L_;
};

}  // namespace strictlab
