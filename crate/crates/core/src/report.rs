//! Instance-size tables and run reports.

use std::fmt::Write;
use std::time::Duration;

use rayon::prelude::*;

use crate::cnf::EncodingStats;
use crate::sgp::{instance_stats, set_model, SgpConfig, SgpError, SgpVariant};
use crate::simplify::unit_propagate;

/// One published `(vars, clauses)` pair.
pub type Size = (usize, usize);

/// Published instance sizes for one `g-p-w` configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReferenceRow {
    pub config: (usize, usize, usize),
    pub de: Size,
    pub tme: Size,
    pub tme_sb: Size,
    pub sce: Size,
    pub sce_up: Size,
    pub sbm: Size,
    pub sbm_up: Size,
    pub sbc: Size,
    pub sbc_up: Size,
}

macro_rules! row {
    ($g:literal $p:literal $w:literal; $($v:literal $c:literal),*) => {{
        let s = [$(($v, $c)),*];
        ReferenceRow {
            config: ($g, $p, $w),
            de: s[0], tme: s[1], tme_sb: s[2], sce: s[3], sce_up: s[4],
            sbm: s[5], sbm_up: s[6], sbc: s[7], sbc_up: s[8],
        }
    }};
}

/// Columns: DE, TME, TME^SB, SCE, SCE_UP, SCE^SBM, SCE^SBM_UP, SCE^SBC, SCE^SBC_UP.
pub const REFERENCE: [ReferenceRow; 14] = [
    row!(5 3 6; 1_350 3_203_055, 1_800 60_255, 1_800 70_935, 8_625 50_400, 1_410 43_905,
        5_702 21_487, 860 17_680, 8_625 50_430, 980 23_110),
    row!(5 3 7; 1_575 4_481_085, 2_100 79_485, 2_100 91_965, 11_110 67_985, 1_645 60_410,
        7_734 30_243, 1_032 25_680, 11_110 68_018, 1_176 33_690),
    row!(8 4 4; 4_096 48_850_176, 5_120 322_816, 5_120 389_872, 24_224 234_912, 3_840 204_928,
        14_192 95_712, 2_376 77_700, 24_224 234_956, 2_580 91_548),
    row!(8 4 5; 5_120 81_378_880, 6_400 482_880, 6_400 566_832, 34_752 372_992, 4_800 335_520,
        22_476 173_180, 3_168 149_184, 34_752 373_040, 3_440 176_240),
    row!(8 4 6; 6_144 121_896_960, 7_680 674_688, 7_680 775_536, 47_072 542_816, 5_760 497_856,
        32_552 273_440, 3_960 243_460, 47_072 542_868, 4_300 288_020),
    row!(8 4 7; 7_168 170_815_680, 8_960 898_240, 8_960 1_015_984, 61_184 744_384, 6_720 691_936,
        44_420 396_492, 4_752 360_528, 61_184 744_440, 5_160 426_888),
    row!(8 4 8; 8_192 227_723_776, 10_240 1_153_536, 10_240 1_288_176, 77_088 977_696,
        7_680 917_760, 58_080 542_336, 5_544 500_388, 77_088 977_756, 6_020 592_844),
    row!(8 4 9; 9_216 292_552_704, 11_520 1_440_576, 11_520 1_592_112, 94_784 1_242_752,
        8_640 1_175_328, 73_532 710_972, 6_336 663_040, 94_784 1_242_816, 6_880 785_888),
    row!(8 4 10; 10_240 365_690_880, 12_800 1_759_360, 12_800 1_927_792, 114_272 1_539_552,
        9_600 1_464_640, 90_776 902_400, 7_128 848_484, 114_272 1_539_620, 7_740 1_006_020),
    row!(9 4 6; 7_776 196_150_032, 9_720 1_047_762, 9_720 1_190_952, 117_324 858_366,
        7_344 792_882, 46_344 447_832, 5_620 471_690, 117_324 858_422, 5_620 471_690),
    row!(9 4 7; 9_072 274_564_584, 11_340 1_400_994, 11_340 1_568_160, 157_284 1_180_026,
        8_568 1_103_634, 63_368 652_344, 6_008 561_712, 157_284 1_180_086, 6_744 700_830),
    row!(9 4 8; 10_368 366_042_816, 12_960 1_805_256, 12_960 1_996_398, 203_076 1_552_716,
        9_792 1_465_416, 82_984 895_176, 7_024 782_620, 203_076 1_552_780, 7_868 974_904),
    row!(9 4 9; 11_664 470_584_728, 14_580 2_260_548, 14_580 2_260_548, 254_700 1_976_436,
        11_016 1_878_228, 105_192 1_176_328, 8_040 1_039_956, 254_700 1_976_504, 8_992 1_293_912),
    row!(9 4 10; 12_960 588_190_320, 16_200 2_766_870, 16_200 3_005_964, 312_156 2_451_186,
        12_240 2_342_070, 129_992 1_495_800, 9_056 1_333_720, 312_156 2_451_258, 10_116 1_657_854),
];

impl ReferenceRow {
    pub fn sgp_config(&self) -> SgpConfig {
        let (g, p, w) = self.config;
        SgpConfig::new(g, p, w).expect("positive sizes")
    }

    pub fn get(&self, column: Column) -> Size {
        match column {
            Column::De => self.de,
            Column::Tme => self.tme,
            Column::TmeSb => self.tme_sb,
            Column::Sce => self.sce,
            Column::SceUp => self.sce_up,
            Column::Sbm => self.sbm,
            Column::SbmUp => self.sbm_up,
            Column::Sbc => self.sbc,
            Column::SbcUp => self.sbc_up,
        }
    }
}

pub fn reference_for(config: SgpConfig) -> Option<&'static ReferenceRow> {
    let key = (config.groups, config.group_size, config.weeks);
    REFERENCE.iter().find(|r| r.config == key)
}

/// A size column: a variant, optionally after unit propagation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Column {
    De,
    Tme,
    TmeSb,
    Sce,
    SceUp,
    Sbm,
    SbmUp,
    Sbc,
    SbcUp,
}

impl Column {
    pub const ALL: [Column; 9] = [
        Column::De,
        Column::Tme,
        Column::TmeSb,
        Column::Sce,
        Column::SceUp,
        Column::Sbm,
        Column::SbmUp,
        Column::Sbc,
        Column::SbcUp,
    ];

    pub const SET_MODEL: [Column; 6] = [
        Column::Sce,
        Column::SceUp,
        Column::Sbm,
        Column::SbmUp,
        Column::Sbc,
        Column::SbcUp,
    ];

    pub fn variant(self) -> SgpVariant {
        match self {
            Column::De => SgpVariant::DE,
            Column::Tme => SgpVariant::TME,
            Column::TmeSb => SgpVariant::TME_SB,
            Column::Sce | Column::SceUp => SgpVariant::SCE,
            Column::Sbm | Column::SbmUp => SgpVariant::SCE_SBM,
            Column::Sbc | Column::SbcUp => SgpVariant::SCE_SBC,
        }
    }

    pub fn propagated(self) -> bool {
        matches!(self, Column::SceUp | Column::SbmUp | Column::SbcUp)
    }

    pub fn name(self) -> String {
        let base = self.variant().name();
        if self.propagated() {
            format!("{base}_UP")
        } else {
            base
        }
    }
}

/// Size of one column for one configuration.
pub fn column_size(config: SgpConfig, column: Column) -> Result<Size, SgpError> {
    let stats = column_stats(config, column)?;
    Ok((stats.variables, stats.clauses))
}

pub fn column_stats(config: SgpConfig, column: Column) -> Result<EncodingStats, SgpError> {
    if column.propagated() {
        let model = set_model(config, column.variant()).expect("set-model column");
        let formula = crate::encoder::encode_model(&model)?;
        return Ok(unit_propagate(&formula).formula.stats());
    }
    instance_stats(config, column.variant())
}

/// One line of a run report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportRow {
    pub variant: String,
    pub config: SgpConfig,
    pub vars: usize,
    pub clauses: usize,
    pub status: Option<String>,
    pub time: Option<Duration>,
    pub verdict: Option<String>,
}

/// Rows in input order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunReport {
    pub rows: Vec<ReportRow>,
}

const RUN_HEADER: [&str; 7] = [
    "variant", "instance", "vars", "clauses", "status", "time_s", "verdict",
];

impl ReportRow {
    fn cells(&self) -> Vec<String> {
        let dash = || "-".to_string();
        vec![
            self.variant.clone(),
            self.config.to_string(),
            self.vars.to_string(),
            self.clauses.to_string(),
            self.status.clone().unwrap_or_else(dash),
            self.time
                .map(|t| format!("{:.2}", t.as_secs_f64()))
                .unwrap_or_else(dash),
            self.verdict.clone().unwrap_or_else(dash),
        ]
    }
}

impl RunReport {
    pub fn to_tsv(&self, header: bool) -> String {
        let rows = self.rows.iter().map(ReportRow::cells).collect::<Vec<_>>();
        tsv(&RUN_HEADER, &rows, header)
    }

    pub fn to_markdown(&self) -> String {
        let rows = self.rows.iter().map(ReportRow::cells).collect::<Vec<_>>();
        markdown(&RUN_HEADER, &rows)
    }
}

fn tsv(header: &[&str], rows: &[Vec<String>], with_header: bool) -> String {
    let mut out = String::new();
    if with_header {
        out.push_str(&header.join("\t"));
        out.push('\n');
    }
    for r in rows {
        out.push_str(&r.join("\t"));
        out.push('\n');
    }
    out
}

fn markdown(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    writeln!(out, "| {} |", header.join(" | ")).unwrap();
    let rule: Vec<&str> = header.iter().map(|_| "---").collect();
    writeln!(out, "|{}|", rule.join("|")).unwrap();
    for r in rows {
        writeln!(out, "| {} |", r.join(" | ")).unwrap();
    }
    out
}

/// Implementation size beside the reference size for one cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cell {
    pub column: Column,
    pub ours: Size,
    pub reference: Option<Size>,
}

impl Cell {
    /// `ours - reference` for vars and clauses.
    pub fn deviation(&self) -> Option<(i64, i64)> {
        self.reference
            .map(|(v, c)| (self.ours.0 as i64 - v as i64, self.ours.1 as i64 - c as i64))
    }

    pub fn matches(&self) -> bool {
        self.deviation() == Some((0, 0))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SizeRow {
    pub config: SgpConfig,
    pub cells: Vec<Cell>,
}

/// Size table over `configs` × `columns`, computed in parallel and returned
/// in input order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SizeTable {
    pub columns: Vec<Column>,
    pub rows: Vec<SizeRow>,
}

pub fn size_table(configs: &[SgpConfig], columns: &[Column]) -> Result<SizeTable, SgpError> {
    let jobs: Vec<(usize, usize)> = (0..configs.len())
        .flat_map(|r| (0..columns.len()).map(move |c| (r, c)))
        .collect();
    let sizes: Vec<Size> = jobs
        .par_iter()
        .map(|&(r, c)| column_size(configs[r], columns[c]))
        .collect::<Result<_, _>>()?;
    let rows = configs
        .iter()
        .enumerate()
        .map(|(r, &config)| SizeRow {
            config,
            cells: columns
                .iter()
                .enumerate()
                .map(|(c, &column)| Cell {
                    column,
                    ours: sizes[r * columns.len() + c],
                    reference: reference_for(config).map(|row| row.get(column)),
                })
                .collect(),
        })
        .collect();
    Ok(SizeTable {
        columns: columns.to_vec(),
        rows,
    })
}

fn signed(d: i64) -> String {
    if d > 0 {
        format!("+{d}")
    } else {
        d.to_string()
    }
}

impl SizeTable {
    fn grid(&self) -> (Vec<String>, Vec<Vec<String>>) {
        let mut header = vec!["instance".to_string()];
        for c in &self.columns {
            let n = c.name();
            header.extend([
                format!("{n} vars"),
                format!("{n} clauses"),
                format!("{n} ref vars"),
                format!("{n} ref clauses"),
                format!("{n} dvars"),
                format!("{n} dclauses"),
            ]);
        }
        let dash = || "-".to_string();
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut cells = vec![row.config.to_string()];
                for cell in &row.cells {
                    cells.push(cell.ours.0.to_string());
                    cells.push(cell.ours.1.to_string());
                    match (cell.reference, cell.deviation()) {
                        (Some(r), Some(d)) => cells.extend([
                            r.0.to_string(),
                            r.1.to_string(),
                            signed(d.0),
                            signed(d.1),
                        ]),
                        _ => cells.extend([dash(), dash(), dash(), dash()]),
                    }
                }
                cells
            })
            .collect();
        (header, rows)
    }

    pub fn to_tsv(&self) -> String {
        let (h, rows) = self.grid();
        let h: Vec<&str> = h.iter().map(String::as_str).collect();
        tsv(&h, &rows, true)
    }

    pub fn to_markdown(&self) -> String {
        let (h, rows) = self.grid();
        let h: Vec<&str> = h.iter().map(String::as_str).collect();
        markdown(&h, &rows)
    }

    pub fn cell(&self, config: SgpConfig, column: Column) -> Option<&Cell> {
        self.rows
            .iter()
            .find(|r| r.config == config)?
            .cells
            .iter()
            .find(|c| c.column == column)
    }
}

/// The fourteen reference configurations.
pub fn reference_configs() -> Vec<SgpConfig> {
    REFERENCE.iter().map(ReferenceRow::sgp_config).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_lookup() {
        let c = SgpConfig::new(8, 4, 4).unwrap();
        assert_eq!(reference_for(c).unwrap().tme_sb, (5_120, 389_872));
        assert!(reference_for(SgpConfig::new(3, 2, 2).unwrap()).is_none());
        assert_eq!(reference_configs().len(), 14);
    }

    #[test]
    fn small_table_renders() {
        let c = SgpConfig::new(5, 3, 6).unwrap();
        let t = size_table(&[c], &[Column::Tme, Column::TmeSb]).unwrap();
        assert!(t.cell(c, Column::Tme).unwrap().matches());
        let tsv = t.to_tsv();
        assert!(tsv.starts_with("instance\tTME vars"));
        assert!(tsv.contains("5-3-6\t1800\t60255\t1800\t60255\t0\t0"));
        let md = t.to_markdown();
        assert!(md.lines().nth(1).unwrap().starts_with("|---|"));
    }

    #[test]
    fn run_report_formats() {
        let r = RunReport {
            rows: vec![ReportRow {
                variant: "DE".into(),
                config: SgpConfig::new(5, 3, 6).unwrap(),
                vars: 1350,
                clauses: 3_203_055,
                status: None,
                time: None,
                verdict: None,
            }],
        };
        assert_eq!(r.to_tsv(false), "DE\t5-3-6\t1350\t3203055\t-\t-\t-\n");
        assert!(r.to_markdown().contains("| DE | 5-3-6 | 1350 | 3203055 |"));
    }
}
