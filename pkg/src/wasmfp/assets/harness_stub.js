// Placeholder harness. Build the full probe runner (frontend/) and point
// the server at its bundle with --harness to run real measurements.
(function () {
  var out = document.getElementById("probe-output");
  var msg = "probe harness bundle not configured on this server";
  if (out) out.textContent = msg;
  console.warn(msg);
})();
