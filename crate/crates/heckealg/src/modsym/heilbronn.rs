//! Families of integer matrices of determinant l used for Hecke operators.

/// [a, b, c, d] for the matrix [[a, b], [c, d]].
pub type IMat = [i64; 4];

fn round_half_away(a: i64, b: i64) -> i64 {
    // nearest integer to a/b, ties away from zero
    let (a2, b2) = (2 * a, 2 * b);
    
    if (a2 >= 0) == (b2 > 0) { (a2.abs() + b.abs()) / b2.abs() } else { -((a2.abs() + b.abs()) / b2.abs()) }
}

/// Heilbronn matrices in Cremona's continued fraction form, for a prime l.
pub fn heilbronn_cremona(l: i64) -> Vec<IMat> {
    if l == 2 {
        return vec![[1, 0, 0, 2], [2, 0, 0, 1], [2, 1, 0, 1], [1, 0, 1, 2]];
    }
    let mut out = vec![[1, 0, 0, l]];
    let h = (l - 1) / 2;
    for r in -h..=h {
        let (mut x1, mut x2, mut y1, mut y2) = (l, -r, 0i64, 1i64);
        let (mut a, mut b) = (-l, r);
        out.push([x1, x2, y1, y2]);
        while b != 0 {
            let q = round_half_away(a, b);
            let c = a - b * q;
            a = -b;
            b = c;
            let x3 = q * x2 - x1;
            x1 = x2;
            x2 = x3;
            let y3 = q * y2 - y1;
            y1 = y2;
            y2 = y3;
            out.push([x1, x2, y1, y2]);
        }
    }
    out
}

/// Merel's family: a > b >= 0, d > c >= 0, ad - bc = n.
pub fn heilbronn_merel(n: i64) -> Vec<IMat> {
    let mut out = Vec::new();
    for a in 1..=n {
        let q = n / a;
        if q * a == n {
            let d = q;
            for b in 0..a {
                out.push([a, b, 0, d]);
            }
            for c in 1..d {
                out.push([a, 0, c, d]);
            }
        }
        for d in q + 1..=n {
            let bc = a * d - n;
            for c in bc / a + 1..d {
                if bc % c == 0 {
                    out.push([a, bc / c, c, d]);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinants() {
        for l in [2i64, 3, 5, 7, 11, 13, 97] {
            for m in heilbronn_cremona(l) {
                assert_eq!(m[0] * m[3] - m[1] * m[2], l, "{m:?}");
            }
            for m in heilbronn_merel(l) {
                assert_eq!(m[0] * m[3] - m[1] * m[2], l);
            }
        }
    }

    #[test]
    fn rounding() {
        assert_eq!(round_half_away(7, 2), 4);
        assert_eq!(round_half_away(-7, 2), -4);
        assert_eq!(round_half_away(7, -2), -4);
        assert_eq!(round_half_away(-5, 3), -2);
        assert_eq!(round_half_away(4, 3), 1);
    }
}
