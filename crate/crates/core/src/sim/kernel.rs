use num_complex::Complex64;

/// Bit mask of `qubit` in an `n`-qubit index (qubit 0 is the MSB).
#[inline]
pub(crate) fn bit_of(n: usize, qubit: usize) -> usize {
    1usize << (n - 1 - qubit)
}

/// Real rotation `[[c, -s], [s, c]]`, the RY kernel without complex multiplies.
pub(super) fn apply_ry(amps: &mut [Complex64], n: usize, qubit: usize, c: f64, s: f64) {
    let mask = bit_of(n, qubit);
    for i0 in 0..amps.len() {
        if i0 & mask != 0 {
            continue;
        }
        let i1 = i0 | mask;
        let a0 = amps[i0];
        let a1 = amps[i1];
        amps[i0] = a0 * c - a1 * s;
        amps[i1] = a0 * s + a1 * c;
    }
}

/// Diagonal phase `diag(p0, p1)` on `qubit`.
pub(super) fn apply_phase(amps: &mut [Complex64], n: usize, qubit: usize, p0: Complex64, p1: Complex64) {
    let mask = bit_of(n, qubit);
    for (i, a) in amps.iter_mut().enumerate() {
        *a *= if i & mask == 0 { p0 } else { p1 };
    }
}

pub(super) fn apply_cnot(amps: &mut [Complex64], n: usize, control: usize, target: usize) {
    let cm = bit_of(n, control);
    let tm = bit_of(n, target);
    for i in 0..amps.len() {
        if i & cm != 0 && i & tm == 0 {
            amps.swap(i, i | tm);
        }
    }
}
