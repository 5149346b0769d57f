//! Shared unit-test fixtures.

use crate::lattice::{EdgeId, EdgeSet, Orientation, PlaquetteId, TorusSize};

/// Two lost qubits create two vertical-domino regions `AB` and `CD` that
/// share two parallel surviving qubits (a doubly-connected superedge).
///
/// Returns `(lost, [a, b, c, d], [shared_lower, shared_upper])`.
pub(crate) fn double_bond_fixture(
    size: TorusSize,
) -> (EdgeSet, [PlaquetteId; 4], [EdgeId; 2]) {
    let a = PlaquetteId::new(1, 1, size);
    let b = PlaquetteId::new(1, 0, size);
    let c = PlaquetteId::new(2, 1, size);
    let d = PlaquetteId::new(2, 0, size);
    let lost = EdgeSet::from_edges(
        &[
            EdgeId::new(1, 1, Orientation::Horizontal, size), // joins A,B
            EdgeId::new(2, 1, Orientation::Horizontal, size), // joins C,D
        ],
        size,
    );
    let shared = [
        EdgeId::new(2, 0, Orientation::Vertical, size), // joins B,D
        EdgeId::new(2, 1, Orientation::Vertical, size), // joins A,C
    ];
    (lost, [a, b, c, d], shared)
}
