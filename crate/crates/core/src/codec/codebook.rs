//! Colored codebook tables.
//!
//! Each word of node `j >= 1` carries the color of its slot pattern; two
//! patterns share a color when they leave node `j - 1` the same column of
//! words. A column of node `j < m - 1` is labelled by the color of the
//! successor pattern it is written around. Colors are handed out in order
//! of first appearance, message by message.

use std::fmt::Write as _;

use serde::Serialize;

use super::code::TimingCode;
use crate::error::{Error, Result};
use crate::model::Symbol;

/// Largest number of words [`codebooks`] lays out.
pub const MAX_TABLE_WORDS: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CodebookEntry {
    /// The word; relay-source symbols that carry the own message print as `B`.
    pub word: String,
    /// `[context color, own color]`, either of which may be absent.
    pub colors: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CodebookColumn {
    /// Color of the successor pattern this column is written around, empty
    /// for the node next to the sink.
    pub label: String,
    /// One entry per forwarded message.
    pub entries: Vec<CodebookEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Codebook {
    pub node: usize,
    pub columns: Vec<CodebookColumn>,
}

fn color_name(mut k: usize) -> String {
    let mut out = Vec::new();
    loop {
        out.push(b'a' + (k % 26) as u8);
        if k < 26 {
            break;
        }
        k = k / 26 - 1;
    }
    out.reverse();
    String::from_utf8(out).expect("ascii")
}

/// Codebooks of nodes `0..m`, ordered by node.
pub fn codebooks(code: &TimingCode) -> Result<Vec<Codebook>> {
    let m = code.spec.m();
    let n = code.block_len;
    let w = code.w0_size;
    let own_node = code.nodes.iter().position(|c| c.own_size.is_some());
    let mut next_color = 0usize;
    // (color, slots node j writes into)
    let mut contexts: Vec<(String, Vec<usize>)> = vec![(String::new(), (0..n).collect())];
    let mut books = Vec::new();
    let mut laid_out = 0usize;
    for j in (0..m).rev() {
        laid_out += contexts.len() * w as usize;
        if laid_out > MAX_TABLE_WORDS {
            return Err(Error::TooLarge(format!("codebooks exceed {MAX_TABLE_WORDS} words")));
        }
        let render = |slots: &[usize], u: u64| -> Result<(String, Vec<usize>)> {
            let own = (Some(j) == own_node).then_some(0);
            let word = code.word(j, slots, u, own)?;
            let text = word
                .symbols()
                .iter()
                .map(|s| match s {
                    Symbol::Transmit(_) if own.is_some() => "B".to_string(),
                    s => s.to_string(),
                })
                .collect();
            Ok((text, word.listen_slots()))
        };
        // column of node j - 1 induced by each own pattern, keyed by its words
        let mut own_colors: Vec<(Vec<String>, String, Vec<usize>)> = Vec::new();
        let mut grid: Vec<Vec<CodebookEntry>> = vec![Vec::new(); contexts.len()];
        for u in 0..w {
            for (c, (label, slots)) in contexts.iter().enumerate() {
                let (text, listen) = render(slots, u)?;
                let mut colors = Vec::new();
                if !label.is_empty() {
                    colors.push(label.clone());
                }
                if j > 0 {
                    let key = (0..w)
                        .map(|v| code.word(j - 1, &listen, v, None).map(|x| x.to_string()))
                        .collect::<Result<Vec<_>>>()?;
                    let color = match own_colors.iter().find(|(k, _, _)| *k == key) {
                        Some((_, color, _)) => color.clone(),
                        None => {
                            let color = color_name(next_color);
                            next_color += 1;
                            own_colors.push((key, color.clone(), listen));
                            color
                        }
                    };
                    colors.push(color);
                }
                grid[c].push(CodebookEntry { word: text, colors });
            }
        }
        let columns = contexts
            .iter()
            .zip(grid)
            .map(|((label, _), entries)| CodebookColumn {
                label: label.clone(),
                entries,
            })
            .collect();
        books.push(Codebook { node: j, columns });
        contexts = own_colors.into_iter().map(|(_, color, slots)| (color, slots)).collect();
    }
    books.reverse();
    Ok(books)
}

fn color_text(colors: &[String]) -> String {
    match colors {
        [] => String::new(),
        [one] => one.clone(),
        many => format!("({})", many.join(",")),
    }
}

/// Text table with one row per forwarded message and one section per node.
pub fn render_codebooks(code: &TimingCode) -> Result<String> {
    let books = codebooks(code)?;
    let rows = code.w0_size as usize;
    let mut sections: Vec<(String, Vec<String>, String)> = Vec::new();
    for book in &books {
        let cells: Vec<String> = (0..rows)
            .map(|u| {
                book.columns
                    .iter()
                    .map(|col| {
                        let e = &col.entries[u];
                        let colors = color_text(&e.colors);
                        if colors.is_empty() {
                            e.word.clone()
                        } else {
                            format!("{} {colors}", e.word)
                        }
                    })
                    .collect::<Vec<_>>()
                    .join("  ")
            })
            .collect();
        let k = book.node;
        let footer = if k == 0 {
            "w0(i)->x0(i)".to_string()
        } else {
            format!("w0(i-{k})->x{k}(i)")
        };
        sections.push((format!("C_{k}"), cells, footer));
    }
    let widths: Vec<usize> = sections
        .iter()
        .map(|(h, cells, f)| cells.iter().chain([h, f]).map(|c| c.chars().count()).max().unwrap_or(0))
        .collect();
    let lead = rows.saturating_sub(1).to_string().len().max(2);
    let mut out = String::new();
    let line = |first: &str, cells: Vec<&str>| {
        let mut s = format!("{first:<lead$}");
        for (c, w) in cells.iter().zip(&widths) {
            let _ = write!(s, " | {c:<w$}");
        }
        s.trim_end().to_string()
    };
    out.push_str(&line("w0", sections.iter().map(|s| s.0.as_str()).collect()));
    out.push('\n');
    for u in 0..rows {
        out.push_str(&line(
            &u.to_string(),
            sections.iter().map(|s| s.1[u].as_str()).collect(),
        ));
        out.push('\n');
    }
    out.push_str(&line("", sections.iter().map(|s| s.2.as_str()).collect()));
    out.push('\n');
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::{build_single_relay_code, build_table2_code};

    fn cells(book: &Codebook, u: usize) -> Vec<String> {
        book.columns
            .iter()
            .map(|c| format!("{} {}", c.entries[u].word, color_text(&c.entries[u].colors)))
            .collect()
    }

    #[test]
    fn table2_layout() {
        let books = codebooks(&build_table2_code().unwrap()).unwrap();
        assert_eq!(
            books[2].columns[0]
                .entries
                .iter()
                .map(|e| format!("{} {}", e.word, e.colors[0]))
                .collect::<Vec<_>>(),
            ["NBNB a", "BNBN b", "NBBN c", "BNNB d"]
        );
        assert_eq!(
            cells(&books[1], 0),
            ["0NNN (a,e)", "N0NN (b,f)", "0NNN (c,e)", "N0NN (d,f)"]
        );
        assert_eq!(
            cells(&books[1], 3),
            ["NN1N (a,g)", "NNN1 (b,g)", "NNN1 (c,g)", "NN1N (d,g)"]
        );
        assert_eq!(cells(&books[0], 0), ["N0NN e", "0NNN f", "0NNN g"]);
        assert_eq!(cells(&books[0], 2), ["NN0N e", "NN0N f", "N0NN g"]);
        assert_eq!(cells(&books[0], 3), ["NN1N e", "NN1N f", "N1NN g"]);
    }

    #[test]
    fn rendered_text() {
        let text = render_codebooks(&build_table2_code().unwrap()).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 6);
        assert!(lines[1].starts_with("0  | N0NN e  0NNN f  0NNN g | 0NNN (a,e)"));
        assert!(lines[1].ends_with("| NBNB a"));
        assert!(lines[5].contains("w0(i-2)->x2(i)"));
        let single = render_codebooks(&build_single_relay_code(4, 1, 2).unwrap()).unwrap();
        assert_eq!(single.lines().count(), 10);
    }

    #[test]
    fn color_names() {
        assert_eq!(color_name(0), "a");
        assert_eq!(color_name(25), "z");
        assert_eq!(color_name(26), "aa");
        assert_eq!(color_name(27), "ab");
    }
}
