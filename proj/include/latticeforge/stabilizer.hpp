#pragma once

// GF(2) stabilizer tableau used as an independent oracle for the graph-state
// measurement rules. Nothing in here calls into graph_state's rewrite rules.

#include "latticeforge/graph_state.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace latticeforge::stabilizer {

/// Pauli operator i^phase * prod_j X_j^{x_j} Z_j^{z_j} on at most 64 qubits.
struct PauliString {
    std::uint64_t x = 0;
    std::uint64_t z = 0;
    std::uint8_t phase = 0;  // mod 4

    friend bool operator==(const PauliString&, const PauliString&) = default;
};

PauliString multiply(const PauliString& lhs, const PauliString& rhs);
bool commutes(const PauliString& lhs, const PauliString& rhs);
PauliString single_qubit(Axis axis, Sign sign, std::size_t qubit);

/// Single-qubit Clifford, stored by where it sends X and Z under conjugation.
///
/// Canonical index = 4 * pair + 2 * (X image negative) + (Z image negative),
/// with the (image of X, image of Z) pairs ordered
///   0:(X,Z) 1:(Z,X) 2:(Y,Z) 3:(X,Y) 4:(Y,X) 5:(Z,Y).
/// Index 0 is the identity, 4 is H, 8 is S.
class Clifford {
   public:
    static constexpr int kCount = 24;

    static Clifford from_index(int index);
    static Clifford identity() { return from_index(0); }
    static Clifford hadamard() { return from_index(4); }
    static Clifford phase() { return from_index(8); }

    int index() const { return index_; }
    /// Conjugation image of a one-qubit Pauli given as (x, z, phase) on bit 0.
    PauliString apply(const PauliString& p) const;
    Clifford then(const Clifford& next) const;  // next after this
    Clifford inverse() const;

    friend bool operator==(const Clifford& a, const Clifford& b) { return a.index_ == b.index_; }

   private:
    explicit Clifford(int index);
    int index_ = 0;
    PauliString image_x_;
    PauliString image_z_;
};

using LocalCliffordWitness = std::vector<Clifford>;

class Tableau {
   public:
    Tableau() = default;
    Tableau(std::vector<PauliString> rows, std::vector<VertexId> qubit_ids);

    std::size_t qubit_count() const { return qubit_ids_.size(); }
    const std::vector<PauliString>& rows() const { return rows_; }
    const std::vector<VertexId>& qubit_ids() const { return qubit_ids_; }

    /// Independence and pairwise commutation of the generators.
    bool satisfies_invariants() const;

    /// Generator set in reduced row-echelon form; equal for equal groups.
    std::vector<PauliString> canonical_rows() const;
    bool same_group(const Tableau& other) const;

    /// Conjugate every generator by the per-qubit Cliffords.
    Tableau conjugated(const LocalCliffordWitness& cliffords) const;

    /// One line per generator, e.g. "+XZI".
    std::string dump() const;

   private:
    std::vector<PauliString> rows_;
    std::vector<VertexId> qubit_ids_;
};

Tableau from_graph(const GraphState& g);

/// Measure without discarding the qubit: the group afterwards contains
/// (sign) * (axis) on `qubit`.
Tableau measure_in_place(const Tableau& t, std::size_t qubit, Axis axis, Sign sign);

/// measure_in_place followed by tracing the qubit out.
Tableau project(const Tableau& t, std::size_t qubit, Axis axis, Sign sign);

struct GraphForm {
    GraphState graph;
    LocalCliffordWitness witness;  // witness applied to |graph> reproduces t
};

GraphForm to_graph_up_to_local_clifford(const Tableau& t);

/// Decided algebraically on the graph forms: the stabilizer spaces are mapped
/// onto each other by some diagonal symplectic (local Clifford) matrix.
bool equal_up_to_local_clifford(const Tableau& t1, const Tableau& t2);

}  // namespace latticeforge::stabilizer
