//! Canonical enumeration of sweep cells.
//!
//! Verification sweeps quantify over parameter tuples that are invariant
//! under relabeling interchangeable categories. To avoid re-checking
//! relabelings, positions are grouped into blocks of interchangeable
//! coordinates and each block picks its options in non-decreasing index
//! order, which visits exactly one representative per orbit.

/// Calls `f` once per canonical assignment. `blocks` lists
/// `(position_count, options)` pairs; the assignment concatenates the
/// blocks' choices in order.
pub(crate) fn for_each_canonical<T: Clone>(
    blocks: &[(usize, Vec<T>)],
    f: &mut impl FnMut(&[T]),
) {
    let mut assignment: Vec<T> = Vec::new();
    descend(blocks, 0, &mut assignment, f);
}

fn descend<T: Clone>(
    blocks: &[(usize, Vec<T>)],
    b: usize,
    assignment: &mut Vec<T>,
    f: &mut impl FnMut(&[T]),
) {
    if b == blocks.len() {
        f(assignment);
        return;
    }
    fill_block(blocks, b, blocks[b].0, 0, assignment, f);
}

fn fill_block<T: Clone>(
    blocks: &[(usize, Vec<T>)],
    b: usize,
    remaining: usize,
    start: usize,
    assignment: &mut Vec<T>,
    f: &mut impl FnMut(&[T]),
) {
    if remaining == 0 {
        descend(blocks, b + 1, assignment, f);
        return;
    }
    let options = &blocks[b].1;
    for i in start..options.len() {
        assignment.push(options[i].clone());
        fill_block(blocks, b, remaining - 1, i, assignment, f);
        assignment.pop();
    }
}

/// Run-length encodes a non-decreasing slice into `(count, value)` blocks.
pub(crate) fn runs(values: &[u64]) -> Vec<(usize, u64)> {
    let mut out: Vec<(usize, u64)> = Vec::new();
    for &v in values {
        match out.last_mut() {
            Some((count, last)) if *last == v => *count += 1,
            _ => out.push((1, v)),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_block_yields_multisets() {
        let mut seen = Vec::new();
        for_each_canonical(&[(2, vec!['a', 'b'])], &mut |x| seen.push(x.to_vec()));
        assert_eq!(
            seen,
            vec![
                vec!['a', 'a'],
                vec!['a', 'b'],
                vec!['b', 'b'],
            ]
        );
    }

    #[test]
    fn blocks_are_independent() {
        let mut seen = Vec::new();
        for_each_canonical(&[(1, vec![0, 1]), (2, vec![7, 8])], &mut |x| {
            seen.push(x.to_vec())
        });
        // 2 options for the singleton block, 3 multisets for the pair.
        assert_eq!(seen.len(), 6);
        assert!(seen.contains(&vec![1, 7, 8]));
        assert!(!seen.contains(&vec![0, 8, 7]));
    }

    #[test]
    fn multiset_counts_match_stars_and_bars() {
        // Choosing k from v options with repetition: C(v + k - 1, k).
        let mut count = 0u64;
        for_each_canonical(&[(3, (0..5).collect::<Vec<_>>())], &mut |_| count += 1);
        assert_eq!(count, 35);
    }

    #[test]
    fn run_length_encoding() {
        assert_eq!(runs(&[1, 1, 4, 5, 5, 5]), vec![(2, 1), (1, 4), (3, 5)]);
        assert_eq!(runs(&[]), vec![]);
    }
}
