#include "latticeforge/stabilizer.hpp"

#include <algorithm>
#include <bit>
#include <bitset>
#include <optional>

namespace latticeforge::stabilizer {

namespace {

constexpr std::size_t kMaxQubits = 64;

std::uint64_t bit(std::size_t i) { return std::uint64_t{1} << i; }

int parity(std::uint64_t v) { return std::popcount(v) & 1; }

std::uint64_t drop_bit(std::uint64_t v, std::size_t q) {
    const std::uint64_t low = v & (bit(q) - 1);
    const std::uint64_t high = q + 1 >= 64 ? 0 : (v >> (q + 1)) << q;
    return low | high;
}

// (image of X, image of Z) pairs in canonical order, as (x, z, phase) triples.
struct PairSpec {
    PauliString x;
    PauliString z;
};

constexpr PauliString kX{1, 0, 0};
constexpr PauliString kY{1, 1, 1};
constexpr PauliString kZ{0, 1, 0};

const std::array<PairSpec, 6>& pair_table() {
    static const std::array<PairSpec, 6> table{{
        {kX, kZ},
        {kZ, kX},
        {kY, kZ},
        {kX, kY},
        {kY, kX},
        {kZ, kY},
    }};
    return table;
}

PauliString negated(PauliString p) {
    p.phase = static_cast<std::uint8_t>((p.phase + 2) & 3);
    return p;
}

PauliString local_part(const PauliString& p, std::size_t q) {
    return {(p.x >> q) & 1, (p.z >> q) & 1, 0};
}

// Conjugate qubit q of `p` by `c`.
PauliString conjugate_qubit(const PauliString& p, std::size_t q, const Clifford& c) {
    const auto image = c.apply(local_part(p, q));
    PauliString out = p;
    out.x = (p.x & ~bit(q)) | (image.x << q);
    out.z = (p.z & ~bit(q)) | (image.z << q);
    out.phase = static_cast<std::uint8_t>((p.phase + image.phase) & 3);
    return out;
}

void conjugate_all(std::vector<PauliString>& rows, std::size_t q, const Clifford& c) {
    for (auto& r : rows) r = conjugate_qubit(r, q, c);
}

void require_qubit(const Tableau& t, std::size_t q) {
    if (q >= t.qubit_count()) {
        throw Error(ErrorKind::NotFound,
                    "qubit " + std::to_string(q) + " is outside a " + std::to_string(t.qubit_count()) + "-qubit tableau");
    }
}

// Indices of rows whose product has the same x/z bits as `target`, or nullopt
// if `target` is outside the span.
std::optional<std::vector<std::size_t>> decompose(const std::vector<PauliString>& rows, const PauliString& target) {
    struct Work {
        std::uint64_t x, z, combo;
    };
    std::vector<Work> work;
    for (std::size_t i = 0; i < rows.size(); ++i) work.push_back({rows[i].x, rows[i].z, bit(i)});

    // Echelon form over the 128 columns (x then z).
    std::vector<std::pair<std::size_t, std::size_t>> pivots;  // (column, row)
    std::size_t rank = 0;
    const std::size_t n = rows.size();
    auto has = [](const Work& w, std::size_t col) {
        return col < 64 ? ((w.x >> col) & 1) : ((w.z >> (col - 64)) & 1);
    };
    for (std::size_t col = 0; col < 128 && rank < n; ++col) {
        std::size_t pick = rank;
        while (pick < n && !has(work[pick], col)) ++pick;
        if (pick == n) continue;
        std::swap(work[rank], work[pick]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r != rank && has(work[r], col)) {
                work[r].x ^= work[rank].x;
                work[r].z ^= work[rank].z;
                work[r].combo ^= work[rank].combo;
            }
        }
        pivots.emplace_back(col, rank);
        ++rank;
    }

    Work t{target.x, target.z, 0};
    for (auto [col, r] : pivots) {
        if (has(t, col)) {
            t.x ^= work[r].x;
            t.z ^= work[r].z;
            t.combo ^= work[r].combo;
        }
    }
    if (t.x != 0 || t.z != 0) return std::nullopt;
    std::vector<std::size_t> out;
    for (std::uint64_t rest = t.combo; rest != 0; rest &= rest - 1) {
        out.push_back(static_cast<std::size_t>(std::countr_zero(rest)));
    }
    return out;
}

}  // namespace

// ---- Pauli arithmetic ---------------------------------------------------------

PauliString multiply(const PauliString& lhs, const PauliString& rhs) {
    // Z^{z1} X^{x2} = (-1)^{|z1 & x2|} X^{x2} Z^{z1}
    const int sign = 2 * parity(lhs.z & rhs.x);
    return {lhs.x ^ rhs.x, lhs.z ^ rhs.z, static_cast<std::uint8_t>((lhs.phase + rhs.phase + sign) & 3)};
}

bool commutes(const PauliString& lhs, const PauliString& rhs) {
    return ((std::popcount(lhs.x & rhs.z) + std::popcount(lhs.z & rhs.x)) & 1) == 0;
}

PauliString single_qubit(Axis axis, Sign sign, std::size_t qubit) {
    PauliString p;
    switch (axis) {
        case Axis::X: p = {bit(qubit), 0, 0}; break;
        case Axis::Y: p = {bit(qubit), bit(qubit), 1}; break;
        case Axis::Z: p = {0, bit(qubit), 0}; break;
    }
    return sign == Sign::Plus ? p : negated(p);
}

// ---- Clifford -----------------------------------------------------------------

Clifford::Clifford(int index) : index_(index) {
    const auto& spec = pair_table()[static_cast<std::size_t>(index / 4)];
    image_x_ = (index & 2) ? negated(spec.x) : spec.x;
    image_z_ = (index & 1) ? negated(spec.z) : spec.z;
}

Clifford Clifford::from_index(int index) {
    if (index < 0 || index >= kCount) {
        throw Error(ErrorKind::Domain, "Clifford index " + std::to_string(index) + " is outside [0, 24)");
    }
    return Clifford(index);
}

PauliString Clifford::apply(const PauliString& p) const {
    PauliString out{0, 0, p.phase};
    if (p.x & 1) out = multiply(out, image_x_);
    if (p.z & 1) out = multiply(out, image_z_);
    return out;
}

Clifford Clifford::then(const Clifford& next) const {
    const auto x = next.apply(image_x_);
    const auto z = next.apply(image_z_);
    for (int i = 0; i < kCount; ++i) {
        Clifford c(i);
        if (c.image_x_ == x && c.image_z_ == z) return c;
    }
    throw Error(ErrorKind::Invariant, "Clifford composition left the group");
}

Clifford Clifford::inverse() const {
    for (int i = 0; i < kCount; ++i) {
        Clifford c(i);
        if (then(c).index_ == 0) return c;
    }
    throw Error(ErrorKind::Invariant, "Clifford without inverse");
}

// ---- Tableau ------------------------------------------------------------------

Tableau::Tableau(std::vector<PauliString> rows, std::vector<VertexId> qubit_ids)
    : rows_(std::move(rows)), qubit_ids_(std::move(qubit_ids)) {
    if (rows_.size() != qubit_ids_.size()) {
        throw Error(ErrorKind::Invariant, "a tableau needs one generator per qubit");
    }
    if (qubit_ids_.size() > kMaxQubits) {
        throw Error(ErrorKind::Resource, "the oracle supports at most 64 qubits");
    }
}

bool Tableau::satisfies_invariants() const {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        for (std::size_t j = i + 1; j < rows_.size(); ++j) {
            if (!commutes(rows_[i], rows_[j])) return false;
        }
    }
    // Independence: no non-trivial subset multiplies to the identity.
    auto canon = canonical_rows();
    return std::none_of(canon.begin(), canon.end(), [](const PauliString& p) { return p.x == 0 && p.z == 0; });
}

std::vector<PauliString> Tableau::canonical_rows() const {
    std::vector<PauliString> rows = rows_;
    const std::size_t n = rows.size();
    auto has = [](const PauliString& p, std::size_t col) {
        return col < 64 ? ((p.x >> col) & 1) : ((p.z >> (col - 64)) & 1);
    };
    std::size_t rank = 0;
    const std::size_t width = qubit_count();
    for (std::size_t pass = 0; pass < 2 * width && rank < n; ++pass) {
        const std::size_t col = pass < width ? pass : 64 + (pass - width);
        std::size_t pick = rank;
        while (pick < n && !has(rows[pick], col)) ++pick;
        if (pick == n) continue;
        std::swap(rows[rank], rows[pick]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r != rank && has(rows[r], col)) rows[r] = multiply(rows[r], rows[rank]);
        }
        ++rank;
    }
    return rows;
}

bool Tableau::same_group(const Tableau& other) const {
    return qubit_count() == other.qubit_count() && canonical_rows() == other.canonical_rows();
}

Tableau Tableau::conjugated(const LocalCliffordWitness& cliffords) const {
    if (cliffords.size() != qubit_count()) {
        throw Error(ErrorKind::Comparability, "witness size does not match the tableau");
    }
    Tableau out = *this;
    for (std::size_t q = 0; q < cliffords.size(); ++q) conjugate_all(out.rows_, q, cliffords[q]);
    return out;
}

std::string Tableau::dump() const {
    std::string out;
    for (const auto& r : rows_) {
        // Y contributes one factor of i in the (x, z) encoding.
        int phase = r.phase;
        phase = (phase + 3 * std::popcount(r.x & r.z)) & 3;
        static constexpr const char* kPrefix[] = {"+", "+i", "-", "-i"};
        out += kPrefix[phase];
        for (std::size_t q = 0; q < qubit_count(); ++q) {
            const bool x = (r.x >> q) & 1;
            const bool z = (r.z >> q) & 1;
            out += x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I');
        }
        out += '\n';
    }
    return out;
}

// ---- operations ---------------------------------------------------------------

Tableau from_graph(const GraphState& g) {
    if (g.empty()) throw Error(ErrorKind::Domain, "a stabilizer tableau needs at least one qubit");
    const auto ids = g.vertices();
    if (ids.size() > kMaxQubits) throw Error(ErrorKind::Resource, "the oracle supports at most 64 qubits");
    std::vector<PauliString> rows(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        rows[i].x = bit(i);
        for (auto u : g.neighbours(ids[i])) {
            const auto j = static_cast<std::size_t>(std::lower_bound(ids.begin(), ids.end(), u) - ids.begin());
            rows[i].z |= bit(j);
        }
    }
    return Tableau(std::move(rows), ids);
}

namespace {

// Returns the updated generators and the index of the row equal to the
// measured operator.
std::pair<std::vector<PauliString>, std::size_t> measure_rows(const Tableau& t, std::size_t q, Axis axis, Sign sign) {
    require_qubit(t, q);
    const auto m = single_qubit(axis, sign, q);
    std::vector<PauliString> rows = t.rows();

    std::optional<std::size_t> first;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (commutes(rows[i], m)) continue;
        if (!first) {
            first = i;
        } else {
            rows[i] = multiply(rows[i], rows[*first]);
        }
    }
    if (first) {
        rows[*first] = m;
        return {std::move(rows), *first};
    }

    // Deterministic outcome: +-m is already in the group.
    auto combo = decompose(rows, m);
    if (!combo || combo->empty()) {
        throw Error(ErrorKind::Invariant, "measured operator commutes with a non-maximal generator set");
    }
    PauliString product{0, 0, 0};
    for (auto i : *combo) product = multiply(product, rows[i]);
    if (product.phase != m.phase) {
        throw Error(ErrorKind::BranchImpossible,
                    std::string("outcome of ") + to_char(axis) + " on qubit " + std::to_string(q) +
                        " is deterministic and opposite to the requested branch",
                    {{"qubit", q}});
    }
    rows[combo->front()] = m;
    return {std::move(rows), combo->front()};
}

}  // namespace

Tableau measure_in_place(const Tableau& t, std::size_t qubit, Axis axis, Sign sign) {
    auto [rows, _] = measure_rows(t, qubit, axis, sign);
    return Tableau(std::move(rows), t.qubit_ids());
}

Tableau project(const Tableau& t, std::size_t qubit, Axis axis, Sign sign) {
    auto [rows, pivot] = measure_rows(t, qubit, axis, sign);
    const PauliString m = rows[pivot];
    std::vector<PauliString> kept;
    kept.reserve(rows.size() - 1);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i == pivot) continue;
        PauliString r = rows[i];
        if (((r.x | r.z) >> qubit) & 1) r = multiply(r, m);
        r.x = drop_bit(r.x, qubit);
        r.z = drop_bit(r.z, qubit);
        kept.push_back(r);
    }
    std::vector<VertexId> ids = t.qubit_ids();
    ids.erase(ids.begin() + static_cast<std::ptrdiff_t>(qubit));
    return Tableau(std::move(kept), std::move(ids));
}

GraphForm to_graph_up_to_local_clifford(const Tableau& t) {
    const std::size_t n = t.qubit_count();
    std::vector<PauliString> rows = t.rows();
    LocalCliffordWitness applied(n, Clifford::identity());
    auto apply_local = [&](std::size_t q, const Clifford& c) {
        conjugate_all(rows, q, c);
        applied[q] = applied[q].then(c);
    };

    // Row-reduce the X block and find its pivot columns.
    std::vector<bool> pivot_col(n, false);
    std::size_t rank = 0;
    for (std::size_t col = 0; col < n && rank < n; ++col) {
        std::size_t pick = rank;
        while (pick < n && !((rows[pick].x >> col) & 1)) ++pick;
        if (pick == n) continue;
        std::swap(rows[rank], rows[pick]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r != rank && ((rows[r].x >> col) & 1)) rows[r] = multiply(rows[r], rows[rank]);
        }
        pivot_col[col] = true;
        ++rank;
    }
    // The pure-Z rows have full rank on the non-pivot columns; a Hadamard there
    // makes the X block invertible.
    for (std::size_t q = 0; q < n; ++q) {
        if (!pivot_col[q]) apply_local(q, Clifford::hadamard());
    }

    // Gauss-Jordan so that row q carries X exactly on qubit q.
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pick = col;
        while (pick < n && !((rows[pick].x >> col) & 1)) ++pick;
        if (pick == n) throw Error(ErrorKind::Invariant, "tableau generators are not independent");
        std::swap(rows[col], rows[pick]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r != col && ((rows[r].x >> col) & 1)) rows[r] = multiply(rows[r], rows[col]);
        }
    }

    // Y on the diagonal: conjugate by the Clifford sending Y to X and fixing Z.
    const Clifford y_to_x = Clifford::from_index(10);
    for (std::size_t q = 0; q < n; ++q) {
        if ((rows[q].z >> q) & 1) apply_local(q, y_to_x);
    }
    // Negative generators: Z on that qubit flips only its own row.
    const Clifford pauli_z = Clifford::from_index(2);
    for (std::size_t q = 0; q < n; ++q) {
        if (rows[q].phase == 2) apply_local(q, pauli_z);
    }

    GraphForm out;
    const auto& ids = t.qubit_ids();
    out.graph = GraphState::with_vertices(ids);
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].x != bit(i) || rows[i].phase != 0 || ((rows[i].z >> i) & 1)) {
            throw Error(ErrorKind::Invariant, "graph-form reduction failed");
        }
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool ij = (rows[i].z >> j) & 1;
            const bool ji = (rows[j].z >> i) & 1;
            if (ij != ji) throw Error(ErrorKind::Invariant, "graph-form adjacency is not symmetric");
            if (ij) out.graph.add_edge(ids[i], ids[j]);
        }
    }
    out.witness.reserve(n);
    for (const auto& c : applied) out.witness.push_back(c.inverse());
    return out;
}

// ---- local-Clifford equivalence -------------------------------------------------

namespace {

using Row = std::bitset<4 * kMaxQubits>;

// Solution space of a homogeneous GF(2) system, as a basis of its null space.
std::vector<Row> null_space(std::vector<Row> eqs, std::size_t vars) {
    std::vector<std::size_t> pivot_of_row;
    std::size_t rank = 0;
    std::vector<bool> is_pivot(vars, false);
    for (std::size_t col = 0; col < vars && rank < eqs.size(); ++col) {
        std::size_t pick = rank;
        while (pick < eqs.size() && !eqs[pick][col]) ++pick;
        if (pick == eqs.size()) continue;
        std::swap(eqs[rank], eqs[pick]);
        for (std::size_t r = 0; r < eqs.size(); ++r) {
            if (r != rank && eqs[r][col]) eqs[r] ^= eqs[rank];
        }
        pivot_of_row.push_back(col);
        is_pivot[col] = true;
        ++rank;
    }
    std::vector<Row> basis;
    for (std::size_t free = 0; free < vars; ++free) {
        if (is_pivot[free]) continue;
        Row v;
        v.set(free);
        for (std::size_t r = 0; r < rank; ++r) {
            if (eqs[r][free]) v.set(pivot_of_row[r]);
        }
        basis.push_back(v);
    }
    return basis;
}

// Affine constraints on the coefficients of the null-space basis, kept in
// echelon form: each stored equation has a pivot no later equation contains.
struct Constraints {
    std::vector<std::pair<std::vector<bool>, bool>> eqs;
    std::vector<std::size_t> pivots;

    bool add(std::vector<bool> lhs, bool rhs) {
        for (std::size_t i = 0; i < eqs.size(); ++i) {
            if (lhs[pivots[i]]) {
                for (std::size_t k = 0; k < lhs.size(); ++k) lhs[k] = lhs[k] != eqs[i].first[k];
                rhs = rhs != eqs[i].second;
            }
        }
        auto it = std::find(lhs.begin(), lhs.end(), true);
        if (it == lhs.end()) return !rhs;
        pivots.push_back(static_cast<std::size_t>(it - lhs.begin()));
        eqs.emplace_back(std::move(lhs), rhs);
        return true;
    }
};

bool search(const std::vector<Row>& basis, std::size_t n, std::size_t qubit, const Constraints& state) {
    if (qubit == n) return true;
    // Per-qubit symplectic 2x2 blocks [[a, b], [c, d]] with ad + bc = 1.
    for (int abcd = 0; abcd < 16; ++abcd) {
        const bool a = abcd & 8, b = abcd & 4, c = abcd & 2, d = abcd & 1;
        if ((a && d) == (b && c)) continue;
        Constraints next = state;
        bool ok = true;
        const std::array<std::pair<std::size_t, bool>, 4> fixes{{{qubit, a}, {n + qubit, b}, {2 * n + qubit, c}, {3 * n + qubit, d}}};
        for (auto [var, value] : fixes) {
            std::vector<bool> lhs(basis.size());
            for (std::size_t k = 0; k < basis.size(); ++k) lhs[k] = basis[k][var];
            if (!next.add(std::move(lhs), value)) {
                ok = false;
                break;
            }
        }
        if (ok && search(basis, n, qubit + 1, next)) return true;
    }
    return false;
}

std::vector<std::vector<bool>> adjacency(const GraphState& g) {
    const auto ids = g.vertices();
    std::vector<std::vector<bool>> m(ids.size(), std::vector<bool>(ids.size(), false));
    for (const auto& e : g.edges()) {
        const auto i = static_cast<std::size_t>(std::lower_bound(ids.begin(), ids.end(), e.a) - ids.begin());
        const auto j = static_cast<std::size_t>(std::lower_bound(ids.begin(), ids.end(), e.b) - ids.begin());
        m[i][j] = m[j][i] = true;
    }
    return m;
}

}  // namespace

bool equal_up_to_local_clifford(const Tableau& t1, const Tableau& t2) {
    if (t1.qubit_count() != t2.qubit_count()) {
        throw Error(ErrorKind::Comparability, "tableaux act on different numbers of qubits");
    }
    const std::size_t n = t1.qubit_count();
    if (n == 0) return true;

    const auto g1 = adjacency(to_graph_up_to_local_clifford(t1).graph);
    const auto g2 = adjacency(to_graph_up_to_local_clifford(t2).graph);

    // Unknown diagonal blocks A, B, C, D (variables a_i, b_i, c_i, d_i) with
    //   g2 * B * g1 + g2 * A + D * g1 + C = 0.
    std::vector<Row> eqs;
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
            Row eq;
            for (std::size_t i = 0; i < n; ++i) {
                if (g2[j][i] && g1[i][k]) eq.flip(n + i);
            }
            if (g2[j][k]) eq.flip(k);
            if (g1[j][k]) eq.flip(3 * n + j);
            if (j == k) eq.flip(2 * n + j);
            if (eq.any()) eqs.push_back(eq);
        }
    }
    const auto basis = null_space(std::move(eqs), 4 * n);
    if (basis.empty()) return false;
    return search(basis, n, 0, Constraints{});
}

}  // namespace latticeforge::stabilizer
