//! Frequently used elements of `ℚ(φ)`.

use crate::scalar::{QuadraticContext, QuadraticNumber};

pub fn q(text: &str) -> QuadraticNumber {
    QuadraticNumber::parse(text, &QuadraticContext::golden()).expect("golden literal")
}

pub fn phi() -> QuadraticNumber {
    q("l")
}

pub fn phi2() -> QuadraticNumber {
    q("1+l")
}

pub fn phi3() -> QuadraticNumber {
    q("1+2*l")
}

pub fn inv_phi() -> QuadraticNumber {
    q("-1+l")
}

pub fn inv_phi2() -> QuadraticNumber {
    q("2-l")
}

pub fn inv_phi3() -> QuadraticNumber {
    q("-3+2*l")
}

pub fn inv_phi4() -> QuadraticNumber {
    q("5-3*l")
}

pub fn num(n: i64) -> QuadraticNumber {
    QuadraticContext::golden().integer(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn powers_are_consistent() {
        assert_eq!(phi() * inv_phi(), num(1));
        assert_eq!(phi2() * inv_phi2(), num(1));
        assert_eq!(phi3() * inv_phi3(), num(1));
        assert_eq!(inv_phi2() * inv_phi2(), inv_phi4());
    }
}
