//! Published Lambert tables for a handful of models, kept as printed so that
//! reports can flag every entry that disagrees with recomputation.

use serde::Serialize;

use crate::rational::{parse, Rational};
use crate::weights::Model;

/// One printed column: `values[i]` is the entry for `m = start + i`.
pub struct Column {
    pub name: &'static str,
    pub start: u64,
    pub values: &'static [&'static str],
}

pub struct PublishedTable {
    pub kvector: &'static [u64],
    pub columns: &'static [Column],
}

const fn col(name: &'static str, values: &'static [&'static str]) -> Column {
    Column { name, start: 1, values }
}

pub static TABLES: &[PublishedTable] = &[
    PublishedTable {
        kvector: &[3, 3, 3],
        columns: &[
            col("b", &["9", "-9", "0", "9", "-9", "0", "9", "-9", "0", "9"]),
            col("bhat", &["-9", "-9/2", "0", "9", "9", "0", "-9", "-9", "0", "9/2"]),
            col(
                "c",
                &[
                    "-9", "-63/2", "-243", "-2304", "-25425", "-614061/2", "-3957534", "-53475840",
                    "-749220273", "-21600703575/2",
                ],
            ),
            col(
                "chat",
                &[
                    "9", "-36", "243", "-2304", "25425", "-307152", "3957534", "-5347840",
                    "749220273", "-10800364500",
                ],
            ),
            col(
                "chat_over_m",
                &[
                    "9", "-18", "81", "-576", "5085", "-51192", "565362", "-6684480", "83246697",
                    "-1080036450",
                ],
            ),
        ],
    },
    PublishedTable {
        kvector: &[2, 4, 4],
        columns: &[
            col(
                "b",
                &[
                    "28", "-134", "996", "-10720", "139292", "-2019450", "31545316", "-520076672",
                    "8930941980", "-158342776966",
                ],
            ),
            col(
                "bhat",
                &[
                    "-28", "-120", "-996", "-10720", "-139292", "-2018952", "-31545316",
                    "-520076672", "-8930941980", "-158342707320",
                ],
            ),
            col(
                "c",
                &[
                    "-28", "-258", "-4860", "-116864", "-3259600", "-99763218", "-3256509228",
                    "-111422514176", "-3951764383896", "-144178140979800",
                ],
            ),
            col(
                "c_over_m",
                &[
                    "-28", "-129", "-1620", "-29216", "-651920", "-16627203", "-465215604",
                    "-13927814272", "-439084931544", "-14417814097980",
                ],
            ),
            col(
                "chat",
                &[
                    "28", "-272", "4860", "-116864", "3259600", "-99765648", "3256509228",
                    "-111422514176", "3951764383896", "-144178142609600",
                ],
            ),
            col(
                "chat_over_m",
                &[
                    "28", "-136", "1620", "-29216", "651920", "-16627608", "465215604",
                    "-13927814272", "439084931544", "-14417814260960",
                ],
            ),
        ],
    },
    PublishedTable {
        kvector: &[2, 3, 6],
        columns: &[
            col(
                "b",
                &[
                    "252", "-13374", "1253124", "-151978752", "21255487740", "-3255937602498",
                    "531216722607876", "-90773367805541376", "16069733941012586748",
                    "-2925411405456230806590",
                ],
            ),
            col(
                "bhat",
                &[
                    "-252", "-13248", "-1253124", "-151978752", "-21255487740", "-3255936975936",
                    "-531216722607876", "-90773367805541376", "-16069733941012586748",
                    "-2925411405445603062720",
                ],
            ),
            col(
                "b_over_m",
                &[
                    "252", "-6687", "417708", "-37994688", "4251097548", "-542656267083",
                    "531216722607876/7", "-11346670975692672", "1785525993445842972",
                    "-292541140545623080659",
                ],
            ),
            col(
                "bhat_over_m",
                &[
                    "-252", "-6624", "-417708", "-37994688", "-4251097548", "-542656162656",
                    "-531216722607876/7", "-11346670975692672", "-1785525993445842972",
                    "-292541140544560306272",
                ],
            ),
            col(
                "c",
                &[
                    "-252", "-18378", "-2545884", "-457060032", "-94790322000", "-21537521398170",
                    "-5211710079116940", "-1320613559984014848", "-346614112277503632216",
                    "-93531635843711988483000",
                ],
            ),
            col(
                "chat",
                &[
                    "252", "-18504", "2545884", "-457060032", "94790322000", "-21537522671112",
                    "5211710079116940", "-1320613559984014848", "346614112277503632216",
                    "-93531635843759383644000",
                ],
            ),
            col(
                "c_over_m",
                &[
                    "-252", "-9189", "-848628", "-114265008", "-18958064400", "-3589586899695",
                    "-744530011302420", "-165076694998001856", "-38512679141944848024",
                    "-9353163584371198848300",
                ],
            ),
            col(
                "chat_over_m",
                &[
                    "252", "-9252", "848628", "-114265008", "18958064400", "-3589587111852",
                    "744530011302420", "-165076694998001856", "38512679141944848024",
                    "-9353163584375938364400",
                ],
            ),
        ],
    },
    PublishedTable {
        kvector: &[4, 4, 4, 4],
        columns: &[
            col("b", &["80", "80", "240", "160", "400", "240", "560", "320", "720", "400"]),
            col(
                "bhat",
                &["-80", "120", "-240", "160", "-400", "360", "-560", "320", "-720", "600"],
            ),
            col("b_over_m", &["80", "40", "80", "40", "80", "40", "80", "40", "80", "40"]),
            col(
                "bhat_over_m",
                &["-80", "60", "-80", "40", "-80", "60", "-80", "40", "-80", "60"],
            ),
            col(
                "c",
                &[
                    "-80", "-3280", "-272240", "-29945760", "-3860155600", "-550279367920",
                    "-84101456589360", "-13526805760545600", "-2262255520889560560",
                    "-390188833066192395600",
                ],
            ),
            col(
                "chat",
                &[
                    "80", "-3320", "272240", "-29945760", "3860155600", "-550279504040",
                    "84101456589360", "-13526805760545600", "2262255520889560560",
                    "-390188833068122473400",
                ],
            ),
            col(
                "c_over_m",
                &[
                    "-80", "-1640", "-272240/3", "-7486440", "-772031120", "-275139683960/3",
                    "-12014493798480", "-1690850720068200", "-754085173629853520/3",
                    "-39018883306619239560",
                ],
            ),
            col(
                "chat_over_m",
                &[
                    "80", "-1660", "272240/3", "-7486440", "772031120", "-275139752020/3",
                    "12014493798480", "-1690850720068200", "754085173629853520/3",
                    "-39018883306812247340",
                ],
            ),
        ],
    },
    PublishedTable {
        kvector: &[5, 5, 5, 5, 5],
        columns: &[
            Column { name: "b", start: 5, values: &["25050301099750"] },
            Column { name: "b", start: 7, values: &["31249534645239703150"] },
        ],
    },
];

/// A printed entry that disagrees with the recomputed value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Erratum {
    pub column: String,
    pub m: u64,
    pub printed: String,
    pub computed: String,
}

pub fn published(model: &Model) -> Option<&'static PublishedTable> {
    let kv = model.kvector()?;
    TABLES.iter().find(|t| t.kvector == kv.parts())
}

impl PublishedTable {
    /// Every printed `(column, m, value)` triple.
    pub fn entries(&self) -> impl Iterator<Item = (&'static str, u64, Rational)> + '_ {
        self.columns.iter().flat_map(|c| {
            c.values.iter().enumerate().map(move |(i, v)| {
                (c.name, c.start + i as u64, parse(v).expect("published values parse"))
            })
        })
    }

    pub fn value(&self, column: &str, m: u64) -> Option<Rational> {
        self.entries().find(|(c, i, _)| *c == column && *i == m).map(|(_, _, v)| v)
    }
}
