use std::fmt;

use serde::{Deserialize, Serialize};

/// Monomial in the jet of a scalar coefficient `u`: `u^base_power` times a
/// product of derivatives `u^(k)`, `k >= 1`, kept sorted so the form is canonical.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct JetMonomial {
    base_power: i32,
    orders: Vec<u32>,
}

impl JetMonomial {
    pub fn one() -> Self {
        Self { base_power: 0, orders: Vec::new() }
    }

    /// `u^p`, with `p` possibly negative.
    pub fn u_pow(p: i32) -> Self {
        Self { base_power: p, orders: Vec::new() }
    }

    /// `u^(k)`; order 0 is the undifferentiated variable.
    pub fn derivative(k: u32) -> Self {
        if k == 0 {
            Self::u_pow(1)
        } else {
            Self { base_power: 0, orders: vec![k] }
        }
    }

    /// Builds from a base power and arbitrary orders; zero orders fold into the base power.
    pub fn new(base_power: i32, orders: impl IntoIterator<Item = u32>) -> Self {
        let mut base = base_power;
        let mut ords = Vec::new();
        for k in orders {
            if k == 0 {
                base += 1;
            } else {
                ords.push(k);
            }
        }
        ords.sort_unstable();
        Self { base_power: base, orders: ords }
    }

    pub fn base_power(&self) -> i32 {
        self.base_power
    }

    /// Sorted derivative orders, all `>= 1`.
    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    /// Number of jet factors: base power plus differentiated factors.
    pub fn degree(&self) -> i32 {
        self.base_power + self.orders.len() as i32
    }

    /// Highest derivative order present (0 when undifferentiated).
    pub fn max_order(&self) -> u32 {
        self.orders.last().copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.base_power == 0 && self.orders.is_empty()
    }

    /// True for `u^p` with no differentiated factor.
    pub fn is_pure_power(&self) -> bool {
        self.orders.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut orders = Vec::with_capacity(self.orders.len() + other.orders.len());
        orders.extend_from_slice(&self.orders);
        orders.extend_from_slice(&other.orders);
        orders.sort_unstable();
        Self { base_power: self.base_power + other.base_power, orders }
    }

    /// `d/dx` by the Leibniz and chain rules, as (integer multiplicity, monomial) pairs.
    pub fn dx(&self) -> Vec<(i64, JetMonomial)> {
        let mut out: Vec<(i64, JetMonomial)> = Vec::new();
        if self.base_power != 0 {
            let mut orders = self.orders.clone();
            orders.push(1);
            orders.sort_unstable();
            out.push((self.base_power as i64, Self { base_power: self.base_power - 1, orders }));
        }
        let mut i = 0;
        while i < self.orders.len() {
            let k = self.orders[i];
            let mut mult = 0i64;
            while i < self.orders.len() && self.orders[i] == k {
                mult += 1;
                i += 1;
            }
            let mut orders = self.orders.clone();
            let pos = orders.iter().position(|&o| o == k).expect("order present");
            orders[pos] = k + 1;
            orders.sort_unstable();
            out.push((mult, Self { base_power: self.base_power, orders }));
        }
        out
    }
}

fn order_str(k: u32) -> String {
    match k {
        0 => "u".to_string(),
        1..=3 => format!("u{}", "'".repeat(k as usize)),
        _ => format!("u^({k})"),
    }
}

impl fmt::Display for JetMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut parts = Vec::new();
        match self.base_power {
            0 => {}
            1 => parts.push("u".to_string()),
            p => parts.push(format!("u^{p}")),
        }
        let mut i = 0;
        while i < self.orders.len() {
            let k = self.orders[i];
            let mut mult = 0;
            while i < self.orders.len() && self.orders[i] == k {
                mult += 1;
                i += 1;
            }
            let s = order_str(k);
            if mult == 1 {
                parts.push(s);
            } else {
                parts.push(format!("({s})^{mult}"));
            }
        }
        write!(f, "{}", parts.join("·"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_orders_fold_into_base_power() {
        let m = JetMonomial::new(1, [0, 2, 0, 1]);
        assert_eq!(m.base_power(), 3);
        assert_eq!(m.orders(), &[1, 2]);
        assert_eq!(m.degree(), 5);
    }

    #[test]
    fn derivative_of_inverse_power_uses_chain_rule() {
        // d/dx u^-2 = -2 u^-3 u'
        let d = JetMonomial::u_pow(-2).dx();
        assert_eq!(d, vec![(-2, JetMonomial::new(-3, [1]))]);
    }

    #[test]
    fn derivative_of_repeated_factor_counts_multiplicity() {
        // d/dx (u')^2 = 2 u' u''
        let d = JetMonomial::new(0, [1, 1]).dx();
        assert_eq!(d, vec![(2, JetMonomial::new(0, [1, 2]))]);
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(JetMonomial::new(1, [2]).to_string(), "u·u''");
        assert_eq!(JetMonomial::new(0, [1, 1]).to_string(), "(u')^2");
        assert_eq!(JetMonomial::new(-2, [4]).to_string(), "u^-2·u^(4)");
    }
}
