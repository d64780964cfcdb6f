// Table of k_max a at k0 a = 1; `None` marks cells where the distribution is distorted.
#[allow(dead_code)]
pub const WA: [f64; 7] = [1.5, 2.0, 4.0, 6.0, 8.0, 10.0, 20.0];
#[allow(dead_code)]
pub const REFERENCE: [(f64, [Option<f64>; 7]); 21] = [
    (0.00, [Some(1.0000), Some(1.0000), Some(1.0000), Some(1.0000), Some(1.0000), Some(1.0000), Some(1.0000)]),
    (0.05, [Some(1.0062), Some(1.0188), Some(1.1777), Some(1.4156), Some(1.6238), Some(1.7726), Some(1.9834)]),
    (0.10, [Some(1.0235), Some(1.0648), Some(1.3799), Some(1.6769), Some(1.8547), Some(1.9397), Some(2.0051)]),
    (0.15, [Some(1.0489), Some(1.1223), Some(1.5349), Some(1.8251), Some(1.9505), Some(1.9937), Some(2.0133)]),
    (0.20, [Some(1.0794), Some(1.1825), Some(1.6571), Some(1.9178), Some(2.0000), Some(2.0204), Some(2.0203)]),
    (0.25, [Some(1.1129), Some(1.2420), Some(1.7575), Some(1.9813), Some(2.0317), Some(2.0390), Some(2.0272)]),
    (0.30, [Some(1.1478), Some(1.3001), Some(1.8430), Some(2.0289), Some(2.0562), Some(2.0551), Some(2.0342)]),
    (0.35, [Some(1.1836), Some(1.3565), Some(1.9185), Some(2.0679), Some(2.0779), Some(2.0704), Some(2.0413)]),
    (0.40, [Some(1.2196), Some(1.4116), Some(1.9874), Some(2.1025), Some(2.0986), Some(2.0857), Some(2.0484)]),
    (0.45, [Some(1.2558), Some(1.4657), Some(2.0524), Some(2.1350), Some(2.1191), Some(2.1012), Some(2.0556)]),
    (0.50, [Some(1.2921), Some(1.5194), Some(2.1155), Some(2.1668), Some(2.1399), Some(2.1170), Some(2.0628)]),
    (0.55, [Some(1.3285), Some(1.5729), Some(2.1785), Some(2.1988), Some(2.1611), Some(2.1331), Some(2.0701)]),
    (0.60, [Some(1.3649), Some(1.6266), Some(2.2429), Some(2.2314), Some(2.1828), Some(2.1495), Some(2.0775)]),
    (0.65, [Some(1.4015), Some(1.6809), Some(2.3101), Some(2.2651), Some(2.2051), Some(2.1663), Some(2.0850)]),
    (0.70, [Some(1.4383), Some(1.7360), Some(2.3819), Some(2.3002), Some(2.2281), Some(2.1834), Some(2.0925)]),
    (0.75, [Some(1.4751), Some(1.7920), Some(2.4599), Some(2.3367), Some(2.2518), Some(2.2009), Some(2.1001)]),
    (0.80, [None, Some(1.8489), Some(2.5466), Some(2.3751), Some(2.2761), Some(2.2188), Some(2.1078)]),
    (0.85, [None, Some(1.9065), Some(2.6456), Some(2.4154), Some(2.3013), Some(2.2371), Some(2.1155)]),
    (0.90, [None, Some(1.9646), Some(2.7627), Some(2.4578), Some(2.3272), Some(2.2558), Some(2.1234)]),
    (0.95, [None, None, Some(2.9091), Some(2.5028), Some(2.3540), Some(2.2750), Some(2.1313)]),
    (1.00, [None, None, Some(3.1137), Some(2.5504), Some(2.3818), Some(2.2947), Some(2.1392)]),
];
