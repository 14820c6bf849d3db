if (/^\d+$/.test(s)) {
  x = "/not/a/regex/";
}
