// Script-direction helper: queries typed in Arabic script render
// right-to-left, everything else left-to-right.

const ARABIC_RANGE = /[؀-ۿݐ-ݿࢠ-ࣿﭐ-﷿ﹰ-﻿]/;

export function containsArabic(text: string): boolean {
  return ARABIC_RANGE.test(text);
}

export function directionFor(text: string): "rtl" | "ltr" {
  return containsArabic(text) ? "rtl" : "ltr";
}
