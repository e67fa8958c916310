#![allow(dead_code)]

/// Tabulated rows: (slopes, external label, generators of G/ι, example isogeny class).
pub const TABULATED: &[(&str, &str, &str, Option<&str>)] = &[
    ("0,0,1/2,1/2,1,1", "D6.6.t.a.2", "(1 2~ 3~)(2 3 1~), (1 2~)(2 1~)", Some("3.2.ac_b_a")),
    (
        "0,0,1/2,1/2,1/2,1/2,1,1",
        "8T9.8.t.a.5",
        "(1 2)(3 4)(1~ 2~)(3~ 4~), (1 3~ 4 2~)(2 1~ 3 4~)",
        Some("4.3.ae_k_ay_bw"),
    ),
    (
        "0,0,1/2,1/2,1/2,1/2,1,1",
        "8T13.8.t.a.2",
        "(1 4 2~ 1~ 4~ 2)(3 3~), (1 2)(3 4~)(4 3~)(1~ 2~)",
        Some("4.4.ab_af_a_bc"),
    ),
    (
        "0,0,1/2,1/2,1/2,1/2,1,1",
        "8T24.8.t.a.1",
        "(1 1~)(2 3~)(3 2~)(4 4~), (1 3~ 2~ 4~)(2 4 1~ 3)",
        Some("4.2.ac_b_c_ag"),
    ),
    ("0,0,0,0,1,1,1,1", "8T13.8.t.a.3", "(1 4~ 3~ 1~ 4 3)(2 2~), (1 2~ 4)(2 4~ 1~)", Some("4.2.ac_b_ac_f")),
    ("0,0,0,0,1,1,1,1", "8T24.8.t.a.4", "(2 3~)(3 2~), (1 3 4~ 1~ 3~ 4)(2 2~)", Some("4.2.ad_c_g_ap")),
    (
        "0,1/3,1/3,1/3,2/3,2/3,2/3,1",
        "8T13.8.t.a.2",
        "(1 2~)(2 1~)(3 4)(3~ 4~), (1 1~)(2 3~ 4 2~ 3 4~)",
        Some("4.3.ab_a_g_ag"),
    ),
    (
        "0,1/3,1/3,1/3,2/3,2/3,2/3,1",
        "8T24.8.t.a.1",
        "(1 2 4~ 1~ 2~ 4)(3 3~), (1 1~)(2 3~)(3 2~)(4 4~)",
        Some("4.2.ad_e_ag_k"),
    ),
    (
        "1/4,1/4,1/4,1/4,3/4,3/4,3/4,3/4",
        "8T13.8.t.a.3",
        "(1 4 3~)(3 1~ 4~), (1 1~)(2 4 3 2~ 4~ 3~)",
        Some("4.4.ae_k_ay_ca"),
    ),
    (
        "1/4,1/4,1/4,1/4,3/4,3/4,3/4,3/4",
        "8T24.8.t.a.4",
        "(2 3~ 4~)(3 4 2~), (1 2~ 4~ 3)(2 4 3~ 1~)",
        Some("4.2.ac_a_e_ag"),
    ),
    ("0,0,0,0,1/2,1/2,1,1,1,1", "D10.10.t.a.2", "(2 3)(4 5)(2~ 3~)(4~ 5~), (1 4)(3 5~)(5 3~)(1~ 4~)", None),
    ("0,0,0,0,1/2,1/2,1,1,1,1", "10T5.10.t.a.5", "(1 3~ 2~ 4)(2 4~ 1~ 3), (1 1~)(2 3~)(3 2~)(4 5~)(5 4~)", None),
    ("0,0,0,0,1/2,1/2,1,1,1,1", "10T5.10.t.a.32", "(1 5~ 3~ 4)(3 4~ 1~ 5), (1 4~)(2 3~)(3 2~)(4 1~)(5 5~)", None),
    ("0,0,0,0,1/2,1/2,1,1,1,1", "10T11.10.t.a.4", "(1 2)(3 5)(1~ 2~)(3~ 5~), (1 5~ 4~)(4 1~ 5)", None),
    (
        "0,0,0,0,1/2,1/2,1,1,1,1",
        "10T22.10.t.a.3",
        "(1 3~ 2)(3 2~ 1~)(4 5)(4~ 5~), (1 5~)(2 4~)(4 2~)(5 1~)",
        Some("5.2.ae_g_ae_b_a"),
    ),
    (
        "0,0,1/2,1/2,1/2,1/2,1/2,1/2,1,1",
        "10T5.10.t.a.1",
        "(1 3 4~ 5)(2 2~)(4 5~ 1~ 3~), (1 4~ 3~ 2~ 5~)(2 5 1~ 4 3)",
        None,
    ),
    (
        "0,0,1/2,1/2,1/2,1/2,1/2,1/2,1,1",
        "10T11.10.t.a.2",
        "(1 5~ 2~ 3~ 4~)(2 3 4 1~ 5), (1 4~ 3~ 5~ 2~)(2 1~ 4 3 5)",
        None,
    ),
    (
        "0,0,1/2,1/2,1/2,1/2,1/2,1/2,1,1",
        "10T22.10.t.a.2",
        "(1 3 4)(2 5~)(5 2~)(1~ 3~ 4~), (1 5 2~ 4 3)(2 4~ 3~ 1~ 5~)",
        Some("5.2.ac_b_a_a_a"),
    ),
    (
        "1/4,1/4,1/4,1/4,1/2,1/2,3/4,3/4,3/4,3/4",
        "10T5.10.t.a.32",
        "(1 5~ 3~ 4)(3 4~ 1~ 5), (1 2 4 3)(5 5~)(1~ 2~ 4~ 3~)",
        None,
    ),
    (
        "1/4,1/4,1/4,1/4,1/2,1/2,3/4,3/4,3/4,3/4",
        "10T11.10.t.a.4",
        "(1 4~ 5~ 2 3~)(3 1~ 4 5 2~), (1 1~)(2 4)(3 5~)(5 3~)(2~ 4~)",
        None,
    ),
    (
        "1/4,1/4,1/4,1/4,1/2,1/2,3/4,3/4,3/4,3/4",
        "10T22.10.t.a.3",
        "(1 2 5~)(5 1~ 2~), (1 3~ 5~)(2 4~)(3 5 1~)(4 2~)",
        Some("5.2.a_ac_ae_c_m"),
    ),
];

/// Generators of a D10 row in the `[0^2,1/2^6,1^2]` table, whose external label is not recorded.
pub const UNLABELLED_D10: (&str, &str) =
    ("0,0,1/2,1/2,1/2,1/2,1/2,1/2,1,1", "(1 5)(2 4~)(4 2~)(1~ 5~), (1 4)(3 5~)(5 3~)(1~ 4~)");

pub mod props;

/// The order-24 g = 6 representation with Galois group A4 × C2.
pub const A4C2_SLOPES: &str = "0,0,0,1/3,1/3,1/3,2/3,2/3,2/3,1,1,1";
pub const A4C2_GENERATORS: &str = "(2 4)(3 5~)(5 3~)(2~ 4~), (1 3~ 4~)(2 6~ 5)(3 4 1~)(6 5~ 2~)";

/// Frobenius polynomials realising it over F_3 and F_8 (descending).
pub const A4C2_P3: [i64; 13] = [1, -3, 0, 14, -21, -27, 120, -81, -189, 378, 0, -729, 729];
pub const A4C2_P8: [i64; 13] = [1, -12, 75, -351, 1392, -4692, 13912, -37536, 89088, -179712, 307200, -393216, 262144];
