use core::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    Direct,
    Isometry,
    Reverse,
    /// Known to fail in general; used by the explorer.
    Refuted,
}

/// Inequality families. Discriminants are stable: they seed the per-trial streams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum Family {
    Chda = 1,
    PowerCd = 2,
    Kadison = 3,
    Asy = 4,
    Asy2 = 5,
    Asy222 = 6,
    Asy33 = 7,
    Perspective = 8,
    CorF2Upper = 9,
    CorF2Lower = 10,
    CorF2Sandwich = 11,
    CorGamma = 12,
    PropFr = 13,
    BrUnitaryDominance = 14,
    ScalarChebyshev = 15,
    Moment = 16,
    Po1 = 20,
    Po1Reverse = 21,
    Tt1m1 = 22,
    Tt1m2 = 23,
    Me1 = 24,
    RevJensen = 30,
    RevChoi = 31,
    ThmReverseF = 32,
    CorNakamoto = 33,
    M4 = 34,
    Elh = 35,
    OmegaGap = 36,
    LemmaAsa = 37,
    ThmMain2 = 38,
    CorLc = 39,
    ChOp1 = 50,
    ChOp2 = 51,
}

const ALL: [Family; 33] = [
    Family::Chda,
    Family::PowerCd,
    Family::Kadison,
    Family::Asy,
    Family::Asy2,
    Family::Asy222,
    Family::Asy33,
    Family::Perspective,
    Family::CorF2Upper,
    Family::CorF2Lower,
    Family::CorF2Sandwich,
    Family::CorGamma,
    Family::PropFr,
    Family::BrUnitaryDominance,
    Family::ScalarChebyshev,
    Family::Moment,
    Family::Po1,
    Family::Po1Reverse,
    Family::Tt1m1,
    Family::Tt1m2,
    Family::Me1,
    Family::RevJensen,
    Family::RevChoi,
    Family::ThmReverseF,
    Family::CorNakamoto,
    Family::M4,
    Family::Elh,
    Family::OmegaGap,
    Family::LemmaAsa,
    Family::ThmMain2,
    Family::CorLc,
    Family::ChOp1,
    Family::ChOp2,
];

impl Family {
    pub fn all() -> &'static [Family] {
        &ALL
    }

    /// Families whose statement is a theorem (everything except the refuted ones).
    pub fn theorems() -> impl Iterator<Item = Family> {
        ALL.iter().copied().filter(|f| f.is_theorem())
    }

    pub fn is_theorem(self) -> bool {
        self.kind() != FamilyKind::Refuted
    }

    pub fn id(self) -> u64 {
        self as u8 as u64
    }

    pub fn kind(self) -> FamilyKind {
        use Family::*;
        match self {
            Po1 | Po1Reverse | Tt1m1 | Tt1m2 | Me1 => FamilyKind::Isometry,
            RevJensen | RevChoi | ThmReverseF | CorNakamoto | M4 | Elh | OmegaGap | LemmaAsa | ThmMain2 | CorLc => {
                FamilyKind::Reverse
            }
            ChOp1 | ChOp2 => FamilyKind::Refuted,
            _ => FamilyKind::Direct,
        }
    }

    pub fn name(self) -> &'static str {
        use Family::*;
        match self {
            Chda => "CHDA",
            PowerCd => "POWER_CD",
            Kadison => "KADISON",
            Asy => "ASY",
            Asy2 => "ASY2",
            Asy222 => "ASY222",
            Asy33 => "ASY33",
            Perspective => "PERSPECTIVE",
            CorF2Upper => "COR_F2_UPPER",
            CorF2Lower => "COR_F2_LOWER",
            CorF2Sandwich => "COR_F2_SANDWICH",
            CorGamma => "COR_GAMMA",
            PropFr => "PROP_FR",
            BrUnitaryDominance => "BR_UNITARY_DOMINANCE",
            ScalarChebyshev => "SCALAR_CHEBYSHEV",
            Moment => "MOMENT",
            Po1 => "PO1",
            Po1Reverse => "PO1_REVERSE",
            Tt1m1 => "TT1M1",
            Tt1m2 => "TT1M2",
            Me1 => "ME1",
            RevJensen => "REV_JENSEN",
            RevChoi => "REV_CHOI",
            ThmReverseF => "THM_REVERSE_F",
            CorNakamoto => "COR_NAKAMOTO",
            M4 => "M4",
            Elh => "ELH",
            OmegaGap => "OMEGA_GAP",
            LemmaAsa => "LEMMA_ASA",
            ThmMain2 => "THM_MAIN2",
            CorLc => "COR_LC",
            ChOp1 => "CH_OP1",
            ChOp2 => "CH_OP2",
        }
    }

    /// Case-insensitive; `-` and `_` are interchangeable.
    pub fn parse(s: &str) -> Option<Family> {
        let norm = |c: char| if c == '-' { '_' } else { c.to_ascii_uppercase() };
        ALL.iter()
            .copied()
            .find(|f| f.name().len() == s.len() && f.name().chars().zip(s.chars()).all(|(a, b)| a == norm(b)))
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for &f in Family::all() {
            assert_eq!(Family::parse(f.name()), Some(f));
        }
        assert_eq!(Family::parse("kadison"), Some(Family::Kadison));
        assert_eq!(Family::parse("cor-f2-upper"), Some(Family::CorF2Upper));
        assert_eq!(Family::parse("nope"), None);
    }

    #[test]
    fn ids_unique() {
        let mut ids: alloc::vec::Vec<u64> = Family::all().iter().map(|f| f.id()).collect();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), Family::all().len());
    }
}
