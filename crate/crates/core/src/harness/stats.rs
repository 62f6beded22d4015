use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use crate::gen::TaskRecord;
use crate::parse::parse;

/// Summary of a dataset's programs and grids.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DatasetStats {
    pub tasks: usize,
    pub examples: usize,
    pub program_sizes: BTreeMap<usize, usize>,
    pub program_depths: BTreeMap<usize, usize>,
    pub grid_rows: BTreeMap<usize, usize>,
    pub grid_cols: BTreeMap<usize, usize>,
    /// Fraction of input-grid cells holding markers.
    pub marker_density: f64,
    /// Fraction of input-grid cells holding obstacles.
    pub obstacle_density: f64,
    pub duplicate_programs: usize,
    pub duplicate_inputs: usize,
    pub unparsable_programs: usize,
    /// Tasks failing replay or any other record invariant.
    pub invalid_tasks: usize,
}

impl DatasetStats {
    pub fn uniqueness_violations(&self) -> usize {
        self.duplicate_programs + self.duplicate_inputs
    }

    /// `section,key,value` rows.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("section,key,value\n");
        let scalars: [(&str, String); 8] = [
            ("tasks", self.tasks.to_string()),
            ("examples", self.examples.to_string()),
            ("marker_density", format!("{:.6}", self.marker_density)),
            ("obstacle_density", format!("{:.6}", self.obstacle_density)),
            ("duplicate_programs", self.duplicate_programs.to_string()),
            ("duplicate_inputs", self.duplicate_inputs.to_string()),
            ("unparsable_programs", self.unparsable_programs.to_string()),
            ("invalid_tasks", self.invalid_tasks.to_string()),
        ];
        for (k, v) in scalars {
            let _ = writeln!(s, "summary,{k},{v}");
        }
        for (name, hist) in self.histograms() {
            for (k, v) in hist {
                let _ = writeln!(s, "{name},{k},{v}");
            }
        }
        s
    }

    pub fn to_table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "tasks               {}", self.tasks);
        let _ = writeln!(s, "examples            {}", self.examples);
        let _ = writeln!(s, "marker density      {:.4}", self.marker_density);
        let _ = writeln!(s, "obstacle density    {:.4}", self.obstacle_density);
        let _ = writeln!(s, "duplicate programs  {}", self.duplicate_programs);
        let _ = writeln!(s, "duplicate inputs    {}", self.duplicate_inputs);
        let _ = writeln!(s, "unparsable programs {}", self.unparsable_programs);
        let _ = writeln!(s, "invalid tasks       {}", self.invalid_tasks);
        for (name, hist) in self.histograms() {
            let _ = writeln!(s, "\n{name}");
            let peak = hist.values().copied().max().unwrap_or(1).max(1);
            for (k, v) in hist {
                let bar = "#".repeat((40 * v).div_ceil(peak));
                let _ = writeln!(s, "  {k:>3} {v:>8} {bar}");
            }
        }
        s
    }

    fn histograms(&self) -> [(&'static str, &BTreeMap<usize, usize>); 4] {
        [
            ("program_size", &self.program_sizes),
            ("program_depth", &self.program_depths),
            ("grid_rows", &self.grid_rows),
            ("grid_cols", &self.grid_cols),
        ]
    }
}

/// Histograms, densities and uniqueness/replay checks over `tasks`.
pub fn dataset_stats(tasks: &[TaskRecord], step_limit: usize) -> DatasetStats {
    let mut st = DatasetStats {
        tasks: tasks.len(),
        ..DatasetStats::default()
    };
    let mut programs = HashSet::new();
    let mut inputs = HashSet::new();
    let (mut cells, mut marker_cells, mut obstacle_cells) = (0usize, 0usize, 0usize);
    for t in tasks {
        if !programs.insert(t.program_source.as_str()) {
            st.duplicate_programs += 1;
        }
        match parse(&t.program_source) {
            Ok(p) => {
                *st.program_sizes.entry(p.statement_count()).or_default() += 1;
                *st.program_depths.entry(p.nesting_depth()).or_default() += 1;
            }
            Err(_) => st.unparsable_programs += 1,
        }
        if t.verify(None, step_limit).is_err() {
            st.invalid_tasks += 1;
        }
        for ex in &t.examples {
            st.examples += 1;
            let w = &ex.input;
            if !inputs.insert(w) {
                st.duplicate_inputs += 1;
            }
            *st.grid_rows.entry(w.rows()).or_default() += 1;
            *st.grid_cols.entry(w.cols()).or_default() += 1;
            cells += w.rows() * w.cols();
            marker_cells += w.markers().len();
            obstacle_cells += w.obstacles().len();
        }
    }
    if cells > 0 {
        st.marker_density = marker_cells as f64 / cells as f64;
        st.obstacle_density = obstacle_cells as f64 / cells as f64;
    }
    st
}
