use std::sync::OnceLock;

use crate::grid::BoundaryWord;
use crate::kl::{decode_label_word, KlError};

pub const LABEL_LENGTH: u32 = 17;
pub const LABEL_SCALE: i64 = 207;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Zero,
    One,
    N,
    M,
    MA,
    X01,
    Y,
    XA,
    YA,
    I0N,
    I1N,
    J0N,
    J1N,
    L,
    LA,
    XP,
    YP,
}

use Label::*;

impl Label {
    pub const ALL: [Label; 17] = [
        Zero, One, N, M, MA, X01, Y, XA, YA, I0N, I1N, J0N, J1N, L, LA, XP, YP,
    ];

    /// Key index, 1..=17.
    pub fn key(self) -> u32 {
        self as u32 + 1
    }

    pub fn from_key(k: u32) -> Option<Label> {
        Label::ALL.get(k.checked_sub(1)? as usize).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            Zero => "0",
            One => "1",
            N => "N",
            M => "M",
            MA => "M_A",
            X01 => "X_01",
            Y => "Y",
            XA => "x_A",
            YA => "y_A",
            I0N => "I_0N",
            I1N => "I_1N",
            J0N => "J_0N",
            J1N => "J_1N",
            L => "L",
            LA => "L_A",
            XP => "X'",
            YP => "Y'",
        }
    }

    pub fn from_name(s: &str) -> Option<Label> {
        Label::ALL.iter().copied().find(|l| l.name() == s)
    }

    /// Lock index set, as labels.
    pub fn lock_labels(self) -> &'static [Label] {
        match self {
            Zero => &[MA, X01, XA, YA, I0N, J0N, LA],
            One => &[MA, X01, XA, YA, I1N, J1N, LA],
            N => &[MA, XA, YA, I0N, I1N, J0N, J1N, LA],
            M => &[M, MA, L, LA],
            MA => &[M, MA, L, LA, Zero, One, N],
            X01 => &[I0N, I1N, J0N, J1N, L, LA, XP, Zero, One],
            Y => &[I0N, I1N, L, LA, YP],
            XA => &[I0N, I1N, J0N, J1N, L, LA, Zero, One, N],
            YA => &[I0N, I1N, L, LA, Zero, One, N],
            I0N => &[X01, Y, XA, YA, L, LA, Zero, N],
            I1N => &[X01, Y, XA, YA, L, LA, One, N],
            J0N => &[X01, XA, L, LA, Zero, N],
            J1N => &[X01, XA, L, LA, One, N],
            L => &[M, MA, X01, Y, XA, YA, I0N, I1N, J0N, J1N],
            LA => &[M, MA, X01, Y, XA, YA, I0N, I1N, J0N, J1N, Zero, One, N],
            XP => &[X01],
            YP => &[Y],
        }
    }

    pub fn lock_keys(self) -> Vec<u32> {
        let mut v: Vec<u32> = self.lock_labels().iter().map(|l| l.key()).collect();
        v.sort_unstable();
        v
    }

    fn lock_mask(self) -> u32 {
        self.lock_labels()
            .iter()
            .fold(0, |m, l| m | 1 << (*l as u32))
    }

    /// Boundary word with the key pointing up, lock first.
    pub fn table_word(self) -> &'static str {
        match self {
            Zero => "r100 d100 r u12 t u17 t u11 t u5 t u5 t u11 t u5 t u27 r5 u3 T u96 r d100 r100",
            One => "r100 d100 r u12 t u11 t u11 t u11 t u5 t u11 t u5 t u27 r5 u9 T u90 r d100 r100",
            N => "r100 d100 r u12 t u11 t u5 t u5 t u5 t u5 t u5 t u17 t u27 r5 u15 T u84 r d100 r100",
            M => "r100 d100 r u12 t u5 t u53 t u5 t u21 r5 u21 T u78 r d100 r100",
            MA => "r100 d100 r u12 t u5 t u53 t u5 t u5 t u5 t u5 t u3 r5 u27 T u72 r d100 r100",
            X01 => "r100 d100 r u6 t u5 t u5 t u5 t u5 t u5 t u5 t u47 t u5 t u3 r5 u33 T u66 r d100 r100",
            Y => "r100 d100 r t u11 t u5 t u17 t u5 t u57 r5 u39 T u60 r d100 r100",
            XA => "r100 d100 r u12 t u5 t u5 t u5 t u5 t u5 t u41 t u5 t u5 t u3 r5 u45 T u54 r d100 r100",
            YA => "r100 d100 r u12 t u5 t u17 t u5 t u41 t u5 t u5 t u3 r5 u51 T u48 r d100 r100",
            I0N => "r100 d100 r u12 t u5 t u29 t u5 t u5 t u5 t u17 t u11 t u3 r5 u57 T u42 r d100 r100",
            I1N => "r100 d100 r u12 t u5 t u29 t u5 t u5 t u5 t u17 t u5 t u9 r5 u63 T u36 r d100 r100",
            J0N => "r100 d100 r u12 t u5 t u35 t u11 t u17 t u11 t u3 r5 u69 T u30 r d100 r100",
            J1N => "r100 d100 r u12 t u5 t u35 t u11 t u17 t u5 t u9 r5 u75 T u24 r d100 r100",
            L => "r100 d100 r u24 t u5 t u5 t u5 t u5 t u5 t u5 t u5 t u5 t u5 t u21 r5 u81 T u18 r d100 r100",
            LA => "r100 d100 r u24 t u5 t u5 t u5 t u5 t u5 t u5 t u5 t u5 t u5 t u5 t u5 t u5 t u3 r5 u87 T u12 r d100 r100",
            XP => "r100 d100 r u66 t u33 r5 u93 T u6 r d100 r100",
            YP => "r100 d100 r u60 t u39 r5 u99 T r d100 r100",
        }
    }

    /// The reference word, before corrections.
    pub fn reference_word(self) -> &'static str {
        CORRECTIONS
            .iter()
            .find(|e| e.0 == self)
            .map_or_else(|| self.table_word(), |e| e.1)
    }

    pub fn word(self) -> BoundaryWord {
        static WORDS: OnceLock<Vec<BoundaryWord>> = OnceLock::new();
        WORDS.get_or_init(|| {
            Label::ALL
                .iter()
                .map(|l| BoundaryWord::parse(l.table_word()).expect("catalog word parses"))
                .collect()
        })[self as usize]
            .clone()
    }
}

/// (label, reference word, corrected word). The reference Y lock wall climbs only 94 of 100 units.
pub const CORRECTIONS: &[(Label, &str, &str)] = &[(
    Y,
    "r100 d100 r t u11 t u5 t u17 t u5 t u51 r5 u39 T u60 r d100 r100",
    "r100 d100 r t u11 t u5 t u17 t u5 t u57 r5 u39 T u60 r d100 r100",
)];

/// Two labelled edges may abut iff each key lies in the other's lock.
pub fn matches(a: Label, b: Label) -> bool {
    static MASKS: OnceLock<[u32; 17]> = OnceLock::new();
    let m = MASKS.get_or_init(|| {
        let mut m = [0u32; 17];
        for l in Label::ALL {
            m[l as usize] = l.lock_mask();
        }
        m
    });
    m[b as usize] >> (a as u32) & 1 == 1 && m[a as usize] >> (b as u32) & 1 == 1
}

/// Label families of the base table, before variants are applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Family {
    M,
    X,
    Y,
    Xs,
    Ys,
    I,
    J,
    L,
    XP,
    YP,
}

fn family_members(f: Family) -> &'static [Label] {
    match f {
        Family::M => &[M, MA],
        Family::X => &[X01],
        Family::Y => &[Y],
        Family::Xs => &[XA],
        Family::Ys => &[YA],
        Family::I => &[I0N, I1N],
        Family::J => &[J0N, J1N],
        Family::L => &[L, LA],
        Family::XP => &[XP],
        Family::YP => &[YP],
    }
}

fn base_set(f: Family) -> &'static [Family] {
    use Family as F;
    match f {
        F::M => &[F::M, F::L],
        F::X => &[F::I, F::J, F::L, F::XP],
        F::Y => &[F::I, F::L, F::YP],
        F::Xs => &[F::I, F::J, F::L],
        F::Ys => &[F::I, F::L],
        F::I => &[F::X, F::Y, F::Xs, F::Ys, F::L],
        F::J => &[F::X, F::Xs, F::L],
        F::L => &[F::M, F::X, F::Y, F::Xs, F::Ys, F::I, F::J],
        F::XP => &[F::X],
        F::YP => &[F::Y],
    }
}

/// Lock set predicted from the base families plus the variant suffix; None for 0, 1, N.
pub fn variant_rule_set(label: Label) -> Option<Vec<u32>> {
    use Family as F;
    let (fam, extra): (Family, &[Label]) = match label {
        Zero | One | N => return None,
        M => (F::M, &[]),
        MA => (F::M, &[Zero, One, N]),
        X01 => (F::X, &[Zero, One]),
        Y => (F::Y, &[]),
        XA => (F::Xs, &[Zero, One, N]),
        YA => (F::Ys, &[Zero, One, N]),
        I0N => (F::I, &[Zero, N]),
        I1N => (F::I, &[One, N]),
        J0N => (F::J, &[Zero, N]),
        J1N => (F::J, &[One, N]),
        L => (F::L, &[]),
        LA => (F::L, &[Zero, One, N]),
        XP => (F::XP, &[]),
        YP => (F::YP, &[]),
    };
    let mut v: Vec<u32> = base_set(fam)
        .iter()
        .flat_map(|f| family_members(*f).iter())
        .chain(extra.iter())
        .map(|l| l.key())
        .collect();
    v.sort_unstable();
    v.dedup();
    Some(v)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelAudit {
    pub label: Label,
    pub displacement: (i64, i64),
    pub simple: bool,
    pub decoded_key: u32,
    pub decoded_lock: Vec<u32>,
    pub cavities: usize,
}

impl LabelAudit {
    pub fn ok(&self) -> bool {
        self.displacement == (LABEL_SCALE, 0)
            && self.simple
            && self.decoded_key == self.label.key()
            && self.decoded_lock == self.label.lock_keys()
            && self.cavities == self.decoded_lock.len()
    }
}

pub fn audit_label(label: Label, word: &BoundaryWord) -> Result<LabelAudit, KlError> {
    let d = decode_label_word(word, LABEL_LENGTH)?;
    Ok(LabelAudit {
        label,
        displacement: word.displacement(),
        simple: word.is_self_avoiding() && d.bump_area == 6 * LABEL_LENGTH as u64 - 2 + 9,
        decoded_key: d.key,
        cavities: d.cavities(),
        decoded_lock: d.lock,
    })
}

#[derive(Clone, Debug, Default)]
pub struct CatalogReport {
    pub audits: Vec<LabelAudit>,
    pub key_bijection: bool,
    pub symmetric: bool,
    pub variant_rule: bool,
    pub errors: Vec<String>,
}

impl CatalogReport {
    pub fn ok(&self) -> bool {
        self.errors.is_empty()
            && self.key_bijection
            && self.symmetric
            && self.variant_rule
            && self.audits.len() == 17
            && self.audits.iter().all(|a| a.ok())
    }
}

pub fn audit_catalog() -> CatalogReport {
    audit_words(|l| l.word())
}

/// Audit against an arbitrary word source, so corrupted catalogs can be fed through the same checks.
pub fn audit_words(word_of: impl Fn(Label) -> BoundaryWord) -> CatalogReport {
    let mut r = CatalogReport::default();
    for l in Label::ALL {
        match audit_label(l, &word_of(l)) {
            Ok(a) => {
                if !a.ok() {
                    r.errors
                        .push(format!("label {} fails audit: {:?}", l.name(), a));
                }
                r.audits.push(a);
            }
            Err(e) => r.errors.push(format!("label {}: {}", l.name(), e)),
        }
    }
    let mut keys: Vec<u32> = r.audits.iter().map(|a| a.decoded_key).collect();
    keys.sort_unstable();
    r.key_bijection = keys == (1..=17).collect::<Vec<_>>();
    r.symmetric = Label::ALL.iter().all(|&a| {
        Label::ALL
            .iter()
            .all(|&b| a.lock_labels().contains(&b) == b.lock_labels().contains(&a))
    });
    r.variant_rule = Label::ALL
        .iter()
        .all(|&l| variant_rule_set(l).is_none_or(|s| s == l.lock_keys()));
    r
}
