//! Backtracking search for embeddings between finite binary relations:
//! injective maps `f` with `a[i][j] ⇔ b[f(i)][f(j)]` for all `i, j`.

/// Adjacency matrix of a binary relation on `0..n`.
pub type Relation = Vec<Vec<bool>>;

fn degree_profile(r: &Relation, i: usize) -> (usize, usize, bool) {
    let out = r[i].iter().filter(|&&x| x).count();
    let inc = r.iter().filter(|row| row[i]).count();
    (out, inc, r[i][i])
}

/// Finds an embedding of `a` into `b`, trying targets in increasing order.
pub fn find_embedding(a: &Relation, b: &Relation) -> Option<Vec<usize>> {
    let (n, m) = (a.len(), b.len());
    if n > m {
        return None;
    }
    let pa: Vec<_> = (0..n).map(|i| degree_profile(a, i)).collect();
    let pb: Vec<_> = (0..m).map(|j| degree_profile(b, j)).collect();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; m];

    fn go(
        i: usize,
        a: &Relation,
        b: &Relation,
        pa: &[(usize, usize, bool)],
        pb: &[(usize, usize, bool)],
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if i == a.len() {
            return true;
        }
        for j in 0..b.len() {
            if used[j] || pa[i].2 != pb[j].2 || pa[i].0 > pb[j].0 || pa[i].1 > pb[j].1 {
                continue;
            }
            let consistent = (0..i).all(|k| a[i][k] == b[j][map[k]] && a[k][i] == b[map[k]][j]);
            if !consistent {
                continue;
            }
            map[i] = j;
            used[j] = true;
            if go(i + 1, a, b, pa, pb, map, used) {
                return true;
            }
            used[j] = false;
        }
        map[i] = usize::MAX;
        false
    }

    go(0, a, b, &pa, &pb, &mut map, &mut used).then_some(map)
}

pub fn embeds(a: &Relation, b: &Relation) -> bool {
    find_embedding(a, b).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: usize) -> Relation {
        (0..n).map(|i| (0..n).map(|j| i <= j).collect()).collect()
    }

    fn antichain(n: usize) -> Relation {
        (0..n).map(|i| (0..n).map(|j| i == j).collect()).collect()
    }

    #[test]
    fn chains_and_antichains() {
        assert!(embeds(&chain(2), &chain(3)));
        assert!(!embeds(&chain(3), &chain(2)));
        assert!(!embeds(&chain(2), &antichain(3)));
        assert!(!embeds(&antichain(2), &chain(3)));
        let f = find_embedding(&chain(2), &chain(4)).unwrap();
        assert!(f[0] < f[1]);
    }
}
