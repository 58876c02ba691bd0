#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "crtc/dessin.hpp"
#include "crtc/errors.hpp"

namespace crtc {

// Region sizes in non-increasing order; the combinatorial invariant of a
// dessin.
struct CombinatorialType {
    std::vector<int> sizes;
    int n = 0;

    bool operator==(const CombinatorialType& o) const { return sizes == o.sizes && n == o.n; }
    bool operator<(const CombinatorialType& o) const {
        return sizes != o.sizes ? sizes < o.sizes : n < o.n;
    }
    std::string str() const {
        std::string s = "[";
        for (size_t i = 0; i < sizes.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(sizes[i]);
        }
        return s + "]";
    }
};

inline CombinatorialType combinatorial_type(const Dessin& d) {
    CombinatorialType t;
    t.n = d.n;
    for (const Region& r : d.regions) t.sizes.push_back(r.size);
    std::sort(t.sizes.begin(), t.sizes.end(), std::greater<int>());
    return t;
}

// ---------------------------------------------------------------------------
// Integer partitions

using Partition = std::vector<int>;  // non-increasing positive parts

// All partitions of n in descending lexicographic order: {n}, {n-1,1}, ...
inline std::vector<Partition> partitions(int n) {
    std::vector<Partition> out;
    Partition cur;
    std::function<void(int, int)> rec = [&](int rem, int maxpart) {
        if (rem == 0) {
            out.push_back(cur);
            return;
        }
        for (int k = std::min(rem, maxpart); k >= 1; --k) {
            cur.push_back(k);
            rec(rem - k, k);
            cur.pop_back();
        }
    };
    rec(n, n);
    return out;
}

// p(n, m): partitions of n with exactly m parts.
inline std::int64_t partition_count_len(int n, int m) {
    if (n < 0 || m < 0) return 0;
    if (n == 0) return m == 0 ? 1 : 0;
    if (m == 0 || m > n) return 0;
    static std::vector<std::vector<std::int64_t>> memo;  // memo[n][m]
    if (static_cast<int>(memo.size()) <= n) {
        size_t old = memo.size();
        memo.resize(n + 1);
        for (size_t i = old; i < memo.size(); ++i) memo[i].assign(i + 1, -1);
    }
    std::function<std::int64_t(int, int)> rec = [&](int nn, int mm) -> std::int64_t {
        if (nn == 0) return mm == 0 ? 1 : 0;
        if (mm <= 0 || mm > nn) return 0;
        std::int64_t& slot = memo[nn][mm];
        if (slot >= 0) return slot;
        slot = rec(nn - 1, mm - 1) + rec(nn - mm, mm);
        return slot;
    };
    return rec(n, m);
}

inline std::int64_t partition_count(int n) {
    if (n < 0) return 0;
    if (n == 0) return 1;
    std::int64_t s = 0;
    for (int m = 1; m <= n; ++m) s += partition_count_len(n, m);
    return s;
}

// The printed bound p(n)(p(n)+1)(p(n)+2)/6 - K(n), with K(n) evaluated
// literally including its floor limits.
inline std::int64_t bound_formula(int n) {
    if (n < 1) throw ValidationError("bound_formula: n must be positive");
    std::int64_t p = partition_count(n);
    std::int64_t head = p * (p + 1) * (p + 2) / 6;
    std::int64_t k = 0;
    for (int r = 1; r <= (n + 1) / 3; ++r) {
        std::int64_t inner_j = 0;
        for (int j = r; j <= (n + 1 - r) / 2; ++j) {
            std::int64_t inner_i = 0;
            for (int i = j; i <= n - j - r + 1; ++i) inner_i += partition_count_len(n, i);
            inner_j += partition_count_len(n, j) * inner_i;
        }
        k += partition_count_len(n, r) * inner_j;
    }
    return head - k;
}

// ---------------------------------------------------------------------------
// Pre-combinatorial types: unordered triples of partitions of n whose doubled
// parts give at least n+2 regions, merged into sorted size lists.  This is
// the brute-force oracle for the printed bound.

struct PreTypeCatalog {
    int n = 0;
    std::vector<std::array<Partition, 3>> triples;
    std::vector<std::vector<int>> merged;  // deduplicated, sorted descending-lex
};

inline PreTypeCatalog enumerate_pretypes(int n) {
    if (n < 1) throw ValidationError("enumerate_pretypes: n must be positive");
    if (n > 12) throw SizeGuard("enumerate_pretypes: n > 12");
    PreTypeCatalog cat;
    cat.n = n;
    std::vector<Partition> parts = partitions(n);
    std::set<std::vector<int>> merged;
    for (size_t a = 0; a < parts.size(); ++a)
        for (size_t b = a; b < parts.size(); ++b)
            for (size_t c = b; c < parts.size(); ++c) {
                size_t len = parts[a].size() + parts[b].size() + parts[c].size();
                if (static_cast<int>(len) < n + 2) continue;
                cat.triples.push_back({parts[a], parts[b], parts[c]});
                std::vector<int> m;
                for (const Partition* p : {&parts[a], &parts[b], &parts[c]})
                    for (int v : *p) m.push_back(2 * v);
                std::sort(m.begin(), m.end(), std::greater<int>());
                merged.insert(m);
            }
    cat.merged.assign(merged.begin(), merged.end());
    std::sort(cat.merged.begin(), cat.merged.end(),
              [](const std::vector<int>& x, const std::vector<int>& y) { return x > y; });
    return cat;
}

// Curated registry of pre-types known not to be combinatorial types.
inline std::vector<std::vector<int>> known_nonrealizable(int n) {
    if (n == 4) return {{6, 4, 4, 4, 4, 2}};
    return {};
}

// ---------------------------------------------------------------------------
// Simple-dessin counting: n x n nonnegative integer matrices with all row and
// column sums 3, up to independent row and column permutations.

namespace detail_count {

using Row = std::vector<int>;
using Matrix = std::vector<Row>;

inline std::string reading(const Matrix& m) {
    std::string s;
    s.reserve(m.size() * m.size());
    for (const Row& r : m)
        for (int v : r) s.push_back(static_cast<char>('0' + v));
    return s;
}

// Reading of the matrix after sorting columns in descending top-down order
// with the given row sequence.
inline std::string colsorted_reading(const Matrix& m, const std::vector<int>& row_order) {
    size_t n = m.size();
    std::vector<std::vector<int>> cols(n, std::vector<int>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) cols[j][i] = m[row_order[i]][j];
    std::sort(cols.begin(), cols.end(), std::greater<std::vector<int>>());
    std::string s;
    s.reserve(n * n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) s.push_back(static_cast<char>('0' + cols[j][i]));
    return s;
}

// Branch and bound over row sequences: is `self` (the reading of the doubly
// sorted candidate) the lexicographic maximum of its orbit?
class CanonicalTest {
public:
    explicit CanonicalTest(const Matrix& m) : m_(m), n_(static_cast<int>(m.size())) {}

    bool is_canonical() {
        self_ = reading(m_);
        // Distinct rows with multiplicities.
        std::vector<Row> distinct;
        std::vector<int> count;
        for (const Row& r : m_) {
            auto it = std::find(distinct.begin(), distinct.end(), r);
            if (it == distinct.end()) {
                distinct.push_back(r);
                count.push_back(1);
            } else {
                count[static_cast<size_t>(it - distinct.begin())]++;
            }
        }
        distinct_ = std::move(distinct);
        count_ = std::move(count);
        std::vector<std::vector<int>> blocks(1, std::vector<int>(static_cast<size_t>(n_)));
        for (int j = 0; j < n_; ++j) blocks[0][static_cast<size_t>(j)] = j;
        std::string prefix;
        return dfs(blocks, prefix, 0);
    }

private:
    // Returns false as soon as an ordering beats self_.
    bool dfs(const std::vector<std::vector<int>>& blocks, const std::string& prefix, int depth) {
        if (depth == n_) return true;
        for (size_t ri = 0; ri < distinct_.size(); ++ri) {
            if (count_[ri] == 0) continue;
            const Row& row = distinct_[ri];
            // Entries of this row with columns re-sorted inside each block.
            std::string ext = prefix;
            std::vector<std::vector<int>> nblocks;
            for (const auto& blk : blocks) {
                std::vector<std::pair<int, int>> vals;  // (-entry, col)
                for (int col : blk) vals.push_back({-row[static_cast<size_t>(col)], col});
                std::stable_sort(vals.begin(), vals.end(),
                                 [](const auto& a, const auto& b) { return a.first < b.first; });
                size_t i = 0;
                while (i < vals.size()) {
                    size_t jj = i;
                    std::vector<int> nb;
                    while (jj < vals.size() && vals[jj].first == vals[i].first) {
                        nb.push_back(vals[jj].second);
                        ++jj;
                    }
                    for (size_t t = i; t < jj; ++t)
                        ext.push_back(static_cast<char>('0' - vals[t].first));
                    nblocks.push_back(std::move(nb));
                    i = jj;
                }
            }
            int cmp = compare_prefix(ext);
            if (cmp < 0) continue;   // this branch can no longer beat self_
            if (cmp > 0) return false;  // prefix already beats self_
            count_[ri]--;
            bool ok = dfs(nblocks, ext, depth + 1);
            count_[ri]++;
            if (!ok) return false;
        }
        return true;
    }

    // Compare ext against the same-length prefix of self_.
    int compare_prefix(const std::string& ext) const {
        int c = self_.compare(0, ext.size(), ext);
        return c == 0 ? 0 : (c < 0 ? 1 : -1);  // >0: ext beats self_
    }

    Matrix m_;
    int n_;
    std::string self_;
    std::vector<Row> distinct_;
    std::vector<int> count_;
};

class DoublySortedGenerator {
public:
    DoublySortedGenerator(int n) : n_(n), colsum_(static_cast<size_t>(n), 0) {}

    std::int64_t run() {
        rows_.clear();
        rows_.reserve(static_cast<size_t>(n_));  // keeps back() pointers stable
        count_ = 0;
        std::vector<int> block_id(static_cast<size_t>(n_), 0);
        place_row(block_id, true);
        return count_;
    }

private:
    void place_row(const std::vector<int>& block_id, bool first_row) {
        Row row(static_cast<size_t>(n_), 0);
        gen_digit(row, 0, 3, block_id, first_row ? nullptr : &rows_.back(), true, block_id);
    }

    void gen_digit(Row& row, int j, int rem, const std::vector<int>& block_id, const Row* prev,
                   bool tight, const std::vector<int>& blocks_ref) {
        if (j == n_) {
            if (rem != 0) return;
            commit_row(row, blocks_ref);
            return;
        }
        int cap = 3 - colsum_[static_cast<size_t>(j)];
        if (j > 0 && block_id[static_cast<size_t>(j)] == block_id[static_cast<size_t>(j - 1)])
            cap = std::min(cap, row[static_cast<size_t>(j - 1)]);
        if (prev && tight) cap = std::min(cap, (*prev)[static_cast<size_t>(j)]);
        // Cheap feasibility: the rest of the row cannot exceed its column caps.
        int avail = 0;
        for (int jj = j + 1; jj < n_; ++jj) avail += 3 - colsum_[static_cast<size_t>(jj)];
        for (int v = std::min(cap, rem); v >= 0; --v) {
            if (rem - v > avail) continue;
            row[static_cast<size_t>(j)] = v;
            bool ntight = tight && prev && v == (*prev)[static_cast<size_t>(j)];
            colsum_[static_cast<size_t>(j)] += v;
            gen_digit(row, j + 1, rem - v, block_id, prev, ntight, blocks_ref);
            colsum_[static_cast<size_t>(j)] -= v;
        }
        row[static_cast<size_t>(j)] = 0;
    }

    void commit_row(const Row& row, const std::vector<int>& block_id) {
        rows_.push_back(row);
        if (static_cast<int>(rows_.size()) == n_) {
            bool full = true;
            for (int s : colsum_)
                if (s != 3) full = false;
            if (full) {
                CanonicalTest test(rows_);
                if (test.is_canonical()) ++count_;
            }
        } else {
            // Refine blocks by the new row's values.
            std::vector<int> nb(static_cast<size_t>(n_));
            int next = 0;
            nb[0] = next;
            for (int j = 1; j < n_; ++j) {
                if (block_id[static_cast<size_t>(j)] != block_id[static_cast<size_t>(j - 1)] ||
                    row[static_cast<size_t>(j)] != row[static_cast<size_t>(j - 1)])
                    ++next;
                nb[static_cast<size_t>(j)] = next;
            }
            place_row(nb, false);
        }
        rows_.pop_back();
    }

    int n_;
    std::vector<int> colsum_;
    std::vector<Row> rows_;
    std::int64_t count_ = 0;
};

// Exhaustive orbit count for small n; the independent oracle for the
// canonical counter.
inline std::int64_t count_simple_brute(int n) {
    std::vector<Row> rows;
    Row cur(static_cast<size_t>(n), 0);
    std::function<void(int, int)> gen = [&](int j, int rem) {
        if (j == n) {
            if (rem == 0) rows.push_back(cur);
            return;
        }
        for (int v = 0; v <= rem; ++v) {
            cur[static_cast<size_t>(j)] = v;
            gen(j + 1, rem - v);
        }
        cur[static_cast<size_t>(j)] = 0;
    };
    gen(0, 3);

    std::vector<int> perm(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) perm[static_cast<size_t>(i)] = i;
    std::vector<std::vector<int>> perms;
    do {
        perms.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));

    std::set<std::string> classes;
    Matrix m(static_cast<size_t>(n));
    std::function<void(int, std::vector<int>&)> build = [&](int i, std::vector<int>& colsum) {
        if (i == n) {
            for (int s : colsum)
                if (s != 3) return;
            std::string best;
            for (const auto& rp : perms) {
                std::string r = colsorted_reading(m, rp);
                if (r > best) best = r;
            }
            classes.insert(best);
            return;
        }
        for (const Row& r : rows) {
            bool ok = true;
            for (int j = 0; j < n; ++j)
                if (colsum[static_cast<size_t>(j)] + r[static_cast<size_t>(j)] > 3) ok = false;
            if (!ok) continue;
            for (int j = 0; j < n; ++j) colsum[static_cast<size_t>(j)] += r[static_cast<size_t>(j)];
            m[static_cast<size_t>(i)] = r;
            build(i + 1, colsum);
            for (int j = 0; j < n; ++j) colsum[static_cast<size_t>(j)] -= r[static_cast<size_t>(j)];
        }
    };
    std::vector<int> colsum(static_cast<size_t>(n), 0);
    build(0, colsum);
    return static_cast<std::int64_t>(classes.size());
}

}  // namespace detail_count

inline std::int64_t count_simple(int n) {
    if (n < 1) throw ValidationError("count_simple: n must be positive");
    if (n > 12) throw SizeGuard("count_simple: n > 12");
    detail_count::DoublySortedGenerator gen(n);
    return gen.run();
}

inline std::int64_t count_simple_brute(int n) {
    if (n < 1 || n > 5) throw SizeGuard("count_simple_brute: supported for n <= 5 only");
    return detail_count::count_simple_brute(n);
}

// (3n)! / (6^{2n} (n!)^2) * exp(2 - 2/(9n)), evaluated through log-gamma.
inline double simple_asymptotic(int n) {
    if (n < 1) throw ValidationError("simple_asymptotic: n must be positive");
    double nn = static_cast<double>(n);
    double lg = std::lgamma(3.0 * nn + 1.0) - 2.0 * nn * std::log(6.0) -
                2.0 * std::lgamma(nn + 1.0) + 2.0 - 2.0 / (9.0 * nn);
    return std::exp(lg);
}

}  // namespace crtc
