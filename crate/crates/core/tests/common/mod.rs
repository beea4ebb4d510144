#![allow(dead_code)]

use fractal_states::SparseState;

pub fn eq3() -> SparseState {
    SparseState::ket(3, 1, &["0"]).unwrap()
}

pub fn eq4() -> SparseState {
    SparseState::ket(3, 3, &["00", "01", "02"]).unwrap()
}

pub fn eq5() -> SparseState {
    SparseState::ket(
        3,
        9,
        &[
            "0000", "0011", "0022", "0100", "0111", "0122", "0200", "0211", "0222",
        ],
    )
    .unwrap()
}

pub fn psi_plus() -> SparseState {
    SparseState::ket(2, 2, &["01", "10"]).unwrap()
}

pub fn psi_minus() -> SparseState {
    SparseState::ket(2, 2, &["01", "-10"]).unwrap()
}

pub fn eq7() -> SparseState {
    SparseState::ket(2, 2, &["0101", "-1010"]).unwrap()
}

pub fn eq8() -> SparseState {
    SparseState::ket(2, 2, &["1001", "-0110"]).unwrap()
}

pub fn eq17() -> SparseState {
    SparseState::ket(2, 4, &["0000", "0011", "1100", "-1111"]).unwrap()
}

/// Every state that differs from `s` by negating exactly one amplitude.
pub fn single_negations(s: &SparseState) -> Vec<SparseState> {
    let r = s.phase_order();
    let keys: Vec<_> = s.entries().map(|(k, _)| k.clone()).collect();
    keys.iter()
        .map(|target| {
            SparseState::from_entries(
                s.local_dim(),
                s.num_qudits(),
                r,
                s.entries().map(|(k, a)| {
                    let a = if k == target { a.negated(r) } else { a.clone() };
                    (k.clone(), a)
                }),
            )
            .unwrap()
        })
        .collect()
}

/// Classical repetition code on bit strings: encode, flip, decode by majority.
pub mod majority_oracle {
    pub fn encode(bits: &[u8], levels: u32) -> Vec<u8> {
        let mut cur = bits.to_vec();
        for _ in 0..levels {
            cur = cur.iter().flat_map(|&b| [b, b, b]).collect();
        }
        cur
    }

    pub fn decode(bits: &[u8], levels: u32) -> Vec<u8> {
        let mut cur = bits.to_vec();
        for _ in 0..levels {
            cur = cur
                .chunks(3)
                .map(|w| u8::from(w.iter().map(|&b| b as u32).sum::<u32>() >= 2))
                .collect();
        }
        cur
    }

    pub fn survives(bits: &[u8], levels: u32, flips: &[usize]) -> bool {
        let mut enc = encode(bits, levels);
        for &p in flips {
            enc[p] ^= 1;
        }
        decode(&enc, levels) == bits
    }
}
