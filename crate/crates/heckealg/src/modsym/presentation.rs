//! Solving the Manin symbol relations: two-term relations by weighted
//! union-find, the remaining ones by sparse elimination.

use crate::ff::{Fe, Field};

/// Sparse vector: sorted (index, nonzero coefficient) pairs.
pub type SVec = Vec<(u32, Fe)>;

/// Weighted union-find: x_a = w[a] * x_parent[a].
pub struct TwoTerm {
    field: Field,
    parent: Vec<u32>,
    w: Vec<Fe>,
    zero: Vec<bool>,
}

impl TwoTerm {
    pub fn new(field: &Field, n: usize) -> Self {
        TwoTerm { field: field.clone(), parent: (0..n as u32).collect(), w: vec![1; n], zero: vec![false; n] }
    }

    /// (root, w) with x_a = w * x_root.
    pub fn find(&mut self, a: usize) -> (usize, Fe) {
        let p = self.parent[a] as usize;
        if p == a {
            return (a, 1);
        }
        let (r, wp) = self.find(p);
        let w = self.field.mul(self.w[a], wp);
        self.parent[a] = r as u32;
        self.w[a] = w;
        (r, w)
    }

    /// Impose x_a = c * x_b.
    pub fn relate(&mut self, a: usize, b: usize, c: Fe) {
        let f = self.field.clone();
        let (ra, wa) = self.find(a);
        let (rb, wb) = self.find(b);
        if ra == rb {
            if wa != f.mul(c, wb) {
                self.zero[ra] = true;
            }
            return;
        }
        if c == 0 {
            self.zero[ra] = true;
            return;
        }
        // x_ra = (c wb / wa) x_rb; attach the larger index below the smaller
        let k = f.div(f.mul(c, wb), wa);
        let (child, par, wk) = if ra > rb { (ra, rb, k) } else { (rb, ra, f.inv(k)) };
        self.parent[child] = par as u32;
        self.w[child] = wk;
        let z = self.zero[child] || self.zero[par];
        self.zero[par] = z;
    }

    pub fn set_zero(&mut self, a: usize) {
        let (r, _) = self.find(a);
        self.zero[r] = true;
    }

    /// None if x_a is zero, else (root, w).
    pub fn resolve(&mut self, a: usize) -> Option<(usize, Fe)> {
        let (r, w) = self.find(a);
        (!self.zero[r]).then_some((r, w))
    }
}

/// Quotient map from free symbols to a basis of the presented space,
/// stored row-compressed.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub dim: usize,
    /// Free symbol represented by each basis element.
    pub basis: Vec<usize>,
    row_ptr: Vec<u32>,
    cols: Vec<u32>,
    vals: Vec<Fe>,
}

impl Quotient {
    pub fn zero(nvar: usize) -> Quotient {
        Quotient { dim: 0, basis: vec![], row_ptr: vec![0; nvar + 1], cols: vec![], vals: vec![] }
    }

    pub fn image(&self, var: usize) -> (&[u32], &[Fe]) {
        let (a, b) = (self.row_ptr[var] as usize, self.row_ptr[var + 1] as usize);
        (&self.cols[a..b], &self.vals[a..b])
    }

    pub fn nvars(&self) -> usize {
        self.row_ptr.len() - 1
    }
}

struct Acc {
    val: Vec<Fe>,
    touched: Vec<u32>,
    mark: Vec<bool>,
}

impl Acc {
    fn new(n: usize) -> Self {
        Acc { val: vec![0; n], touched: vec![], mark: vec![false; n] }
    }
    fn add(&mut self, f: &Field, i: u32, c: Fe) {
        let iu = i as usize;
        self.val[iu] = f.add(self.val[iu], c);
        if !self.mark[iu] {
            self.mark[iu] = true;
            self.touched.push(i);
        }
    }
    fn drain(&mut self) -> SVec {
        let mut out: SVec = Vec::with_capacity(self.touched.len());
        for &i in &self.touched {
            let iu = i as usize;
            if self.val[iu] != 0 {
                out.push((i, self.val[iu]));
            }
            self.val[iu] = 0;
            self.mark[iu] = false;
        }
        self.touched.clear();
        out.sort_unstable_by_key(|e| e.0);
        out
    }
}

/// Solve the relations (each a sparse vector over `nroots` unknowns that
/// must vanish). Returns for each unknown either its free-basis index or its
/// expression in the free unknowns.
pub fn solve(field: &Field, nroots: usize, rels: Vec<SVec>) -> (Vec<usize>, Vec<Option<SVec>>) {
    let f = field;
    let mut last_use = vec![0usize; nroots];
    for (r, rel) in rels.iter().enumerate() {
        for &(i, _) in rel {
            last_use[i as usize] = r;
        }
    }
    let mut expr: Vec<Option<SVec>> = vec![None; nroots];
    let mut order = Vec::new();
    let mut acc = Acc::new(nroots);
    let mut stack = Vec::new();
    for rel in rels {
        for &(i, c) in &rel {
            acc.add(f, i, c);
            if expr[i as usize].is_some() {
                stack.push(i);
            }
        }
        while let Some(x) = stack.pop() {
            let xu = x as usize;
            let c = acc.val[xu];
            if c == 0 {
                continue;
            }
            acc.val[xu] = 0;
            for &(y, e) in expr[xu].as_ref().unwrap() {
                acc.add(f, y, f.mul(c, e));
                if expr[y as usize].is_some() {
                    stack.push(y);
                }
            }
        }
        let v = acc.drain();
        if v.is_empty() {
            continue;
        }
        let &(piv, pc) = v.iter().min_by_key(|&&(i, _)| (last_use[i as usize], i)).unwrap();
        let s = f.neg(f.inv(pc));
        let e: SVec = v.iter().filter(|e| e.0 != piv).map(|&(i, c)| (i, f.mul(s, c))).collect();
        expr[piv as usize] = Some(e);
        order.push(piv);
    }
    // back substitution: later pivots are final when earlier ones are processed
    for &piv in order.iter().rev() {
        let e = expr[piv as usize].take().unwrap();
        for &(y, c) in &e {
            match &expr[y as usize] {
                Some(ey) => {
                    for &(z, d) in ey {
                        acc.add(f, z, f.mul(c, d));
                    }
                }
                None => acc.add(f, y, c),
            }
        }
        expr[piv as usize] = Some(acc.drain());
    }
    let free: Vec<usize> = (0..nroots).filter(|&i| expr[i].is_none()).collect();
    (free, expr)
}

/// Assemble the quotient map of `nvar` free symbols given the two-term
/// structure and the further relations (over free symbols).
pub fn build_quotient(field: &Field, uf: &mut TwoTerm, nvar: usize, rels: Vec<SVec>) -> Quotient {
    let f = field;
    // number the surviving roots
    let mut root_id = vec![u32::MAX; nvar];
    let mut roots = Vec::new();
    let mut res: Vec<Option<(usize, Fe)>> = Vec::with_capacity(nvar);
    for a in 0..nvar {
        let r = uf.resolve(a);
        if let Some((root, _)) = r {
            if root_id[root] == u32::MAX {
                root_id[root] = roots.len() as u32;
                roots.push(root);
            }
        }
        res.push(r);
    }
    let nroots = roots.len();
    let mut acc = Acc::new(nroots);
    let rrels: Vec<SVec> = rels
        .into_iter()
        .map(|rel| {
            for (a, c) in rel {
                if let Some((root, w)) = res[a as usize] {
                    acc.add(f, root_id[root], f.mul(c, w));
                }
            }
            acc.drain()
        })
        .filter(|v| !v.is_empty())
        .collect();
    let (free, expr) = solve(f, nroots, rrels);
    let mut basis_id = vec![u32::MAX; nroots];
    for (b, &r) in free.iter().enumerate() {
        basis_id[r] = b as u32;
    }
    let mut row_ptr = Vec::with_capacity(nvar + 1);
    let mut cols = Vec::new();
    let mut vals = Vec::new();
    row_ptr.push(0u32);
    for r in res.iter() {
        if let Some((root, w)) = *r {
            let id = root_id[root] as usize;
            match &expr[id] {
                None => {
                    cols.push(basis_id[id]);
                    vals.push(w);
                }
                Some(e) => {
                    for &(y, c) in e {
                        cols.push(basis_id[y as usize]);
                        vals.push(f.mul(w, c));
                    }
                }
            }
        }
        row_ptr.push(cols.len() as u32);
    }
    let basis = free.iter().map(|&r| roots[r]).collect();
    Quotient { dim: free.len(), basis, row_ptr, cols, vals }
}
