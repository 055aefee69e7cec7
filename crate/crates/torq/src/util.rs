//! Small combinatorial helpers shared by the analysis modules.

/// All `k`-element subsets of `0..n`, each sorted ascending, in
/// lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        // Advance to the next combination.
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// All subsets of `0..n` as sorted index lists, by increasing size then
/// lexicographic order.
pub(crate) fn all_subsets(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for k in 0..=n {
        out.extend(combinations(n, k));
    }
    out
}

pub(crate) fn complement(n: usize, subset: &[usize]) -> Vec<usize> {
    let mut mask = vec![false; n];
    for &i in subset {
        mask[i] = true;
    }
    (0..n).filter(|&i| !mask[i]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combinations_count_and_order() {
        let c = combinations(4, 2);
        assert_eq!(c.len(), 6);
        assert_eq!(c[0], vec![0, 1]);
        assert_eq!(c[5], vec![2, 3]);
    }

    #[test]
    fn combinations_edges() {
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert_eq!(combinations(3, 4), Vec::<Vec<usize>>::new());
        assert_eq!(combinations(0, 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn complement_works() {
        assert_eq!(complement(5, &[1, 3]), vec![0, 2, 4]);
    }
}
