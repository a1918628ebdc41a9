use crate::arcs::{ArcSet, Vertex};
use crate::oracle::OracleError;

pub const EXACT_DOMSET_MAX_VERTICES: usize = 16;

/// A minimum-cardinality set `D` such that every vertex is in `D` or has an
/// incoming arc from a member of `D`. Exhaustive search by increasing size.
pub fn exact_min_dominating_set(arcs: &ArcSet) -> Result<Vec<Vertex>, OracleError> {
    let n = arcs.num_vertices();
    if n > EXACT_DOMSET_MAX_VERTICES {
        return Err(OracleError::TooLarge(n));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let full: u32 = (1u32 << n) - 1;
    let cover: Vec<u32> = (0..n as Vertex)
        .map(|u| arcs.successors(u).fold(1u32 << u, |m, v| m | (1 << v)))
        .collect();
    for size in 1..=n {
        // Gosper's hack enumerates all masks with `size` bits set
        let mut mask: u32 = (1u32 << size) - 1;
        while mask <= full {
            let mut covered = 0u32;
            let mut rest = mask;
            while rest != 0 {
                let u = rest.trailing_zeros() as usize;
                covered |= cover[u];
                rest &= rest - 1;
            }
            if covered == full {
                return Ok((0..n as Vertex).filter(|&u| mask & (1 << u) != 0).collect());
            }
            let c = mask & mask.wrapping_neg();
            let r = mask + c;
            mask = (((r ^ mask) >> 2) / c) | r;
        }
    }
    unreachable!("the full vertex set always dominates")
}
