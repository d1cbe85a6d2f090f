let id: `${number}-${number}` = "1-2";
