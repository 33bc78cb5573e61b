//! Published relations and expansions used as fixtures.

#![allow(dead_code)]

use amalgam_green::exact::MPoly;

pub fn poly(s: &str) -> MPoly {
    s.parse().expect("fixture parses")
}

pub const Q2: &str = "bR^2+R-b(2+xi)";
pub const Q3: &str = "b^2R^3+2bR^2+(1-3b^2)R-b(2+ b xi)";
pub const Q4: &str = "b^3R^4+3b^2R^3+b(3-4b^2)R^2+(1-6b^2)R-b(2-2b^2+b^2 xi)";
pub const Q5: &str = "b^4R^5+4b^3R^4+(6b^2-5b^4)R^3+(4b-12b^3)R^2+(1-9b^2+5b^4)R -b(2-4b^2+b^3 xi)";

pub const Q22: &str = "bR^2+2R-4b(2+xi)";
pub const P22: &str = "(1 - 8b^2 - 4b^2 xi) C^2-b^2";

pub const Q23: &str = "b^5R^6 + 7b^4R^5 + b^3(19 - 12b^2 - 3b^2 xi)R^4 + \
 b^2(25 - 56b^2 - 14b^2 xi - 2b^3 xi)R^3 \
 +b(16 - 93b^2 + 21b^4 - 23b^2 xi - 7b^3 xi + 12b^4 xi + 3b^4 xi^2 )R^2 \
 +  (4 - 65b^2 + 49b^4 - 16b^2 xi - 9b^3 xi + 28b^4 xi - 6b^5 xi + 7b^4 xi^2 - 6b^5 xi^2)R \
 - b(16 - 28b^2 + 2b^4 + 4 xi + 4b xi - 17b^2 xi + 7b^3 xi - 3b^4 xi - 4b^2 xi^2 + 7b^3 xi^2 \
 - b^4 xi^2 + b^4 xi^3)";

pub const P23: &str = "(1 - 12b^2 + 21b^4 - 2b^6 - 3b^2 xi - 2b^3 xi + 12b^4 xi - 6b^5 xi + 3b^6 xi + \
   3b^4 xi^2 - 6b^5 xi^2 + b^6 xi^2 - b^6 xi^3) C^3 \
 + (b - 8b^3 + 7b^5 - 2b^3 xi - b^4 xi + 4b^5 xi - b^6 xi + b^5 xi^2 - b^6 xi^2) C^2 \
 - (b^2 - 3b^4 - b^4 xi + b^5 xi - b^6 xi) C -b^3 + b^5";

pub const P24: &str = "(1 - 16 b^2 + 60 b^4 - 32 b^6 + 4 b^8 - 4 b^2 xi + \
   30 b^4 xi - 40 b^6 xi + 4 b^8 xi + 6 b^4 xi^2 \
 - 28 b^6 xi^2 - 3 b^8 xi^2 - 4 b^6 xi^3 - 2 b^8 xi^3 + b^8 xi^4) G^4 \
 + (2 b - 24 b^3 + 60 b^5 - 16 b^7 - 6 b^3 xi + 30 b^5 xi - 20 b^7 xi + 6 b^5 xi^2 \
 -   14 b^7 xi^2 - 2 b^7 xi^3) G^3 \
 + (-2 b^4 + 10 b^6 + b^6 xi - 2 b^8 xi - 3 b^8 xi^2) G^2 \
 + (-2 b^3 + 8 b^5 - 2 b^7 + 2 b^5 xi - b^7 xi) G -b^4 + 2 b^6";

pub const P25: &str = "(1 - 20 b^2 + 115 b^4 - 180 b^6 + 45 b^8 - 2 b^10 - \
   5 b^2 xi + 60 b^4 xi - 2 b^5 xi - 145 b^6 xi \
 - 30 b^7 xi + 20 b^8 xi + 10 b^9 xi - 5 b^10 xi + 10 b^4 xi^2 - 60 b^6 xi^2 - 20 b^7 xi^2 + 25 b^8 xi^2 \
 - 10 b^9 xi^2 + b^10 xi^2 - 10 b^6 xi^3 + 20 b^8 xi^3 - 10 b^9 xi^3 + 5 b^10 xi^3 + 5 b^8 xi^4 - b^10 xi^5) G^5 \
 +(3 b - 48 b^3 + 207 b^5 - 216 b^7 + 27 b^9 - 12 b^3 xi + 108 b^5 xi - 3 b^6 xi - 174 b^7 xi \
 - 27 b^8 xi + 12 b^9 xi + 3 b^10 xi + 18 b^5 xi^2 - 72 b^7 xi^2 - 18 b^8 xi^2 + 15 b^9 xi^2 - 3 b^10 xi^2 \
 - 12 b^7 xi^3 + 12 b^9 xi^3 - 3 b^10 xi^3 + 3 b^9 xi^4) G^4 \
 + (2 b^2 - 27 b^4 + 97 b^6 - 75 b^8 + 2 b^10 - 6 b^4 xi + 45 b^6 xi - 6 b^7 xi - 61 b^8 xi \
 - 7 b^9 xi - b^10 xi + 6 b^6 xi^2 - 21 b^8 xi^2 - 8 b^9 xi^2 + 4 b^10 xi^2 - 2 b^8 xi^3 + 3 b^10 xi^3) G^3 \
 + (-2 b^3 + 13 b^5 - 7 b^7 - 5 b^9 + 4 b^5 xi - 6 b^7 xi - 4 b^8 xi - 8 b^9 xi \
 - 2 b^7 xi^2 - 3 b^9 xi^2 - b^10 xi^2) G^2 \
 + (-3 b^4 + 15 b^6 - 11 b^8 + 3 b^6 xi - 3 b^8 xi - b^9 xi - b^10 xi) G -b^5 + 3 b^7 - b^9";

/// Printed Cauchy-transform expansions: (power of b, coefficients of ξ^0, ξ^1, …).
pub const C23: &[(usize, &[i64])] = &[
    (1, &[1]),
    (3, &[4, 1]),
    (4, &[0, 1]),
    (5, &[26, 12, 1]),
    (6, &[0, 15, 5]),
    (7, &[194, 132, 25, 1]),
    (8, &[0, 175, 105, 14]),
    (9, &[1542, 1392, 432, 52, 1]),
    (10, &[0, 1887, 1593, 406, 30]),
    (11, &[12714, 14320, 6275, 1350, 125, 1]),
];

pub const C24: &[(usize, &[i64])] = &[
    (1, &[1]),
    (3, &[4, 1]),
    (5, &[26, 13, 1]),
    (7, &[196, 150, 30, 1]),
    (9, &[1588, 1644, 545, 60, 1]),
    (11, &[13424, 17540, 8160, 1585, 110, 1]),
];

pub const C25: &[(usize, &[i64])] = &[
    (1, &[1]),
    (3, &[4, 1]),
    (5, &[26, 12, 1]),
    (6, &[0, 1]),
    (7, &[196, 132, 24, 1]),
    (8, &[0, 21, 7]),
    (9, &[1590, 1408, 400, 40, 1]),
    (10, &[0, 306, 189, 27]),
    (11, &[13482, 14800, 5741, 940, 60, 1]),
    (12, &[0, 3861, 3388, 924, 77]),
];

pub const G23: &[i64] = &[1, 0, 4, 0, 28, 10, 244, 210, 2412, 3366, 26014];
pub const G24: &[i64] = &[1, 0, 4, 0, 28, 0, 256, 0, 2684, 0, 30404];
pub const G25: &[i64] = &[1, 0, 4, 0, 28, 0, 244, 14, 2396, 378, 25324, 7238];

/// Printed single-factor factorizations: (n, p coefficients, q coefficients), low degree first.
pub const FACTORS: &[(usize, &[i64], &[i64])] = &[
    (2, &[1], &[1, 0, -2]),
    (3, &[1, 0, -1], &[1, 0, -3]),
    (4, &[1, 0, -2], &[1, 0, -4, 0, 2]),
    (5, &[1, 0, -3, 0, 1], &[1, 0, -5, 0, 5]),
];
