use num_bigint::BigUint;
use num_traits::One;

/// Bell number B_n via the Bell triangle.
pub fn bell_number(n: usize) -> BigUint {
    let mut row = vec![BigUint::one()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(row.last().unwrap().clone());
        for x in &row {
            let v = next.last().unwrap() + x;
            next.push(v);
        }
        row = next;
    }
    row[0].clone()
}

/// Number of integer partitions p(n).
pub fn integer_partition_count(n: usize) -> BigUint {
    let mut p = vec![BigUint::default(); n + 1];
    p[0] = BigUint::one();
    for part in 1..=n {
        for total in part..=n {
            let add = p[total - part].clone();
            p[total] += add;
        }
    }
    p[n].clone()
}

/// n!! = n (n-2) (n-4) ..., with 0!! = (-1)!! = 1.
pub fn double_factorial(n: usize) -> BigUint {
    let mut acc = BigUint::one();
    let mut k = n;
    while k > 1 {
        acc *= k;
        k -= 2;
    }
    acc
}
