use serde_json::{Map, Number, Value};

/// Significant digits of every emitted real.
pub const SIG_DIGITS: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Bool(bool),
}

impl Cell {
    pub fn text(s: impl Into<String>) -> Self {
        Cell::Text(s.into())
    }

    fn render(&self) -> String {
        match self {
            Cell::Num(v) => fmt_num(*v),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) if v.is_finite() => {
                let rounded: f64 = fmt_num(*v).parse().expect("formatted float parses");
                Number::from_f64(rounded).map_or(Value::Null, Value::Number)
            }
            Cell::Num(v) => Value::String(fmt_num(*v)),
            Cell::Int(i) => Value::from(*i),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Bool(b) => Value::Bool(*b),
        }
    }
}

/// Twelve significant digits; fixed notation for exponents in `[-5, 11]`,
/// scientific otherwise. Infinities print as `infinity`.
pub fn fmt_num(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "infinity".into() } else { "-infinity".into() };
    }
    let v = if v == 0.0 { 0.0 } else { v };
    let sci = format!("{:.*e}", SIG_DIGITS - 1, v);
    let exp: i32 = sci[sci.find('e').expect("exponent") + 1..].parse().expect("exponent");
    if (-5..SIG_DIGITS as i32).contains(&exp) {
        format!("{:.*}", (SIG_DIGITS as i32 - 1 - exp) as usize, v)
    } else {
        sci
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn column(&self, name: &str) -> usize {
        self.columns
            .iter()
            .position(|c| c == name)
            .unwrap_or_else(|| panic!("no column {name}"))
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// Array of row objects, keys in column order.
    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut m = Map::new();
                for (c, v) in self.columns.iter().zip(row) {
                    m.insert(c.clone(), v.json());
                }
                Value::Object(m)
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&Value::Array(rows)).expect("json");
        s.push('\n');
        s
    }

    /// One row per distinct `keys` tuple (first-seen order), with a
    /// `value[curve]` column per curve and value column.
    pub fn widen(&self, curve: &str, keys: &[&str], values: &[&str]) -> Table {
        let ci = self.column(curve);
        let ki: Vec<usize> = keys.iter().map(|k| self.column(k)).collect();
        let vi: Vec<usize> = values.iter().map(|v| self.column(v)).collect();

        let mut curves: Vec<String> = Vec::new();
        let mut points: Vec<Vec<String>> = Vec::new();
        for row in &self.rows {
            let c = row[ci].render();
            if !curves.contains(&c) {
                curves.push(c);
            }
            let key: Vec<String> = ki.iter().map(|&i| row[i].render()).collect();
            if !points.contains(&key) {
                points.push(key);
            }
        }

        let mut columns: Vec<String> = keys.iter().map(|k| k.to_string()).collect();
        for c in &curves {
            for v in values {
                columns.push(format!("{v}[{c}]"));
            }
        }
        let width = vi.len();
        let mut grid: Vec<Vec<Cell>> = points
            .iter()
            .map(|key| {
                let mut r: Vec<Cell> = key.iter().map(|k| Cell::Text(k.clone())).collect();
                r.resize(keys.len() + curves.len() * width, Cell::text(""));
                r
            })
            .collect();
        for row in &self.rows {
            let c = curves.iter().position(|c| *c == row[ci].render()).expect("seen");
            let key: Vec<String> = ki.iter().map(|&i| row[i].render()).collect();
            let p = points.iter().position(|k| *k == key).expect("seen");
            for (j, &i) in vi.iter().enumerate() {
                grid[p][keys.len() + c * width + j] = row[i].clone();
            }
        }
        Table { columns, rows: grid }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_num(0.5), "0.500000000000");
        assert_eq!(fmt_num(2.0 * std::f64::consts::SQRT_2), "2.82842712475");
        assert_eq!(fmt_num(1234.5), "1234.50000000");
        assert_eq!(fmt_num(9.9999999999996), "10.0000000000");
        assert_eq!(fmt_num(1.5e-7), "1.50000000000e-7");
        assert_eq!(fmt_num(-3.0e15), "-3.00000000000e15");
        assert_eq!(fmt_num(-0.0), "0.00000000000");
        assert_eq!(fmt_num(f64::INFINITY), "infinity");
        for v in [0.123456789012345, 7.0e-5, 42.0, 1e11] {
            let digits: String = fmt_num(v).chars().filter(|c| c.is_ascii_digit()).collect();
            assert_eq!(digits.trim_start_matches('0').len(), 12, "{v}");
        }
    }

    #[test]
    fn csv_and_json_layout() {
        let mut t = Table::new(&["a", "b", "c"]);
        t.push(vec![Cell::Num(0.25), Cell::Bool(true), Cell::text("x")]);
        assert_eq!(t.to_csv(), "a,b,c\n0.250000000000,true,x\n");
        let v: Value = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(v[0]["a"], 0.25);
        assert_eq!(v[0]["b"], true);
    }

    #[test]
    fn widen_groups_by_point() {
        let mut t = Table::new(&["curve", "x", "v"]);
        for c in ["p", "q"] {
            for x in [1.0, 2.0] {
                t.push(vec![Cell::text(c), Cell::Num(x), Cell::Num(x * if c == "p" { 1.0 } else { 10.0 })]);
            }
        }
        let w = t.widen("curve", &["x"], &["v"]);
        assert_eq!(w.columns, vec!["x", "v[p]", "v[q]"]);
        assert_eq!(w.rows.len(), 2);
        assert_eq!(w.rows[1][2], Cell::Num(20.0));
    }
}
