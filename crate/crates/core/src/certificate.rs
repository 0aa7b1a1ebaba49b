//! Stand-alone checks for linkage certificates.
//!
//! Deliberately written against the raw adjacency query only, so that a
//! defect in the path types or the constructions cannot hide itself here.

use thiserror::Error;

use crate::digraph::Digraph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertificateError {
    #[error("expected {expected} paths, got {got}")]
    WrongCount { expected: usize, got: usize },
    #[error("path {index} is empty")]
    EmptyPath { index: usize },
    #[error("path {index} runs {got:?}, expected {expected:?}")]
    WrongEndpoints {
        index: usize,
        expected: (usize, usize),
        got: (usize, usize),
    },
    #[error("vertex {vertex} out of range in path {index}")]
    OutOfRange { index: usize, vertex: usize },
    #[error("path {index} uses missing arc {from} -> {to}")]
    MissingArc { index: usize, from: usize, to: usize },
    #[error("vertex {vertex} used twice")]
    RepeatedVertex { vertex: usize },
}

/// Checks that `paths[i]` is an `(x_i, y_i)`-path of `d` and that the paths
/// are pairwise vertex-disjoint.
pub fn verify_linkage(d: &Digraph, pairs: &[(usize, usize)], paths: &[Vec<usize>]) -> Result<(), CertificateError> {
    if pairs.len() != paths.len() {
        return Err(CertificateError::WrongCount {
            expected: pairs.len(),
            got: paths.len(),
        });
    }
    let n = d.n();
    let mut seen = vec![false; n];
    for (index, (p, &(x, y))) in paths.iter().zip(pairs).enumerate() {
        let (Some(&first), Some(&last)) = (p.first(), p.last()) else {
            return Err(CertificateError::EmptyPath { index });
        };
        if (first, last) != (x, y) {
            return Err(CertificateError::WrongEndpoints {
                index,
                expected: (x, y),
                got: (first, last),
            });
        }
        for &v in p {
            if v >= n {
                return Err(CertificateError::OutOfRange { index, vertex: v });
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(CertificateError::RepeatedVertex { vertex: v });
            }
        }
        for w in p.windows(2) {
            if !d.has_arc(w[0], w[1]) {
                return Err(CertificateError::MissingArc {
                    index,
                    from: w[0],
                    to: w[1],
                });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_and_rejects() {
        let d = Digraph::complete(5);
        let pairs = [(0, 1), (2, 4)];
        assert!(verify_linkage(&d, &pairs, &[vec![0, 1], vec![2, 3, 4]]).is_ok());
        assert!(matches!(
            verify_linkage(&d, &pairs, &[vec![0, 1], vec![2, 1, 4]]),
            Err(CertificateError::RepeatedVertex { vertex: 1 })
        ));
        assert!(matches!(
            verify_linkage(&d, &pairs, &[vec![0, 1], vec![4, 2]]),
            Err(CertificateError::WrongEndpoints { index: 1, .. })
        ));
        assert!(matches!(verify_linkage(&d, &pairs, &[vec![0, 1]]), Err(CertificateError::WrongCount { .. })));
        let p = Digraph::from_arcs(3, [(0, 1)]).unwrap();
        assert!(matches!(
            verify_linkage(&p, &[(1, 0)], &[vec![1, 0]]),
            Err(CertificateError::MissingArc { index: 0, from: 1, to: 0 })
        ));
        assert!(matches!(verify_linkage(&p, &[(1, 0)], &[vec![]]), Err(CertificateError::EmptyPath { index: 0 })));
    }
}
