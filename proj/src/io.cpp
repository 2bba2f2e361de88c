namespace arctic {
}
