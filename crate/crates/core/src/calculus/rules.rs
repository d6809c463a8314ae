pub const GENERIC: &str = "Eq4.2-generic";

pub const NCSS_1: &str = "Thm-ncss-(1)";
pub const NCSS_2: &str = "Thm-ncss-(2)";
pub const NCSS_3: &str = "Thm-ncss-(3)";
pub const NCSS_4: &str = "Thm-ncss-(4)";
pub const NCSS_5: &str = "Thm-ncss-(5)";
pub const NCSS_6: &str = "Thm-ncss-(6)";
pub const NCSS_7: &str = "Thm-ncss-(7)";
pub const NCSS_1P: &str = "Thm-ncss-(1′)";
pub const NCSS_2P: &str = "Thm-ncss-(2′)";
pub const NCSS_3P: &str = "Thm-ncss-(3′)";
pub const NCSS_5P: &str = "Thm-ncss-(5′)";
pub const NCSS_6P: &str = "Thm-ncss-(6′)";

pub const COR_DSCR: &str = "Cor-dscr";
pub const FFF: &str = "Thm-FFF";
pub const FFF2: &str = "Thm-FFF2";
pub const FFF3: &str = "Thm-FFF3";
pub const FFF4: &str = "Thm-FFF4";
pub const BBB: &str = "Thm-BBB";
pub const BBB2: &str = "Thm-BBB2";
pub const BBB3: &str = "Thm-BBB3";
pub const BBB4: &str = "Thm-BBB4";
pub const FF_BORDER_POS: &str = "Eq4.5-4''";
pub const BB_BORDER_POS: &str = "Eq4.51";
pub const MIXED: &str = "Sec-othr";
pub const MIXED_REDUCTION: &str = "Eq1.19''-reduction";
pub const TARGET_SWITCH: &str = "Eq1.19''-target";

pub const FFF_VERTEX_1: &str = "Eq4.6";
pub const FFF_VERTEX_2: &str = "Eq4.7";
pub const BBB_VERTEX_1: &str = "Eq4.16";
pub const BBB_VERTEX_2: &str = "Eq4.17";
pub const BBB_DIAG_1: &str = "Eq4.33";
pub const BBB_DIAG_2: &str = "Eq4.34";
pub const BBB3_VERTEX_1: &str = "Eq4.45";
pub const BBB3_VERTEX_2: &str = "Eq4.46";

pub const ST_OPEN: &str = "Remark-ST-open";
pub const VERTEX_OPEN: &str = "Remark-vertex-open";
pub const BORDER_B_OPEN: &str = "Remark-Bpinf-open";
pub const UNREACHED: &str = "Open-unreached";
pub const REGION_COMPLETE: &str = "Region-complete";

pub const EMB_SIMPLE: &str = "Eq1.19";
pub const EMB_EPS: &str = "Eq1.19'";
pub const EMB_CROSS: &str = "Eq1.19''";
pub const EMB_SOBOLEV_B: &str = "Eq1.20";
pub const EMB_SOBOLEV_F: &str = "Eq1.20'";
pub const EMB_JAWERTH: &str = "Eq1.21";
pub const EMB_LINF_B: &str = "Eq1.22";
pub const EMB_LINF_F: &str = "Eq1.23";
pub const EMB_LR_F: &str = "Eq1.24";
pub const EMB_LR_B: &str = "Eq1.25";
pub const EMB_CONVERSE: &str = "Remark-embd";
pub const EMB_OPEN: &str = "Remark-embd-open";
pub const THETA_FAMILY: &str = "Eq2.5-theta";
pub const RHO_FAMILY: &str = "Eq2.5-rho";
pub const RHO_SCALING: &str = "Eq2.2-rho";
pub const THETA_SCALING: &str = "Eq2.2-theta";
pub const DOMAIN_B: &str = "Eq4.5.7";
pub const DOMAIN_F: &str = "Eq4.5.6";
